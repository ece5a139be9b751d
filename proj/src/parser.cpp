#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <set>
#include <unordered_map>

#include "mps/frontend.hpp"

namespace mps {

namespace {

enum class Tok {
    End, Ident, Int,
    LParen, RParen, Comma, Semi, Colon, Eq,
    Plus, Minus, Star, Slash, Lt, Le, Gt, Ge,
    Under, Over, Offset,
    // keywords
    Node, Imported, Returns, Var, Let, Tel, Fby, Wcet, Rate, Due,
    True, False, IntType, BoolType, And, Or, Not,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    Span span;
};

const char* describe(Tok t)
{
    switch (t) {
    case Tok::End: return "end of file";
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::Colon: return "':'";
    case Tok::Eq: return "'='";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::Under: return "'/^'";
    case Tok::Over: return "'*^'";
    case Tok::Offset: return "'~>'";
    case Tok::Node: return "'node'";
    case Tok::Imported: return "'imported'";
    case Tok::Returns: return "'returns'";
    case Tok::Var: return "'var'";
    case Tok::Let: return "'let'";
    case Tok::Tel: return "'tel'";
    case Tok::Fby: return "'fby'";
    case Tok::Wcet: return "'wcet'";
    case Tok::Rate: return "'rate'";
    case Tok::Due: return "'due'";
    case Tok::True: return "'true'";
    case Tok::False: return "'false'";
    case Tok::IntType: return "'int'";
    case Tok::BoolType: return "'bool'";
    case Tok::And: return "'and'";
    case Tok::Or: return "'or'";
    case Tok::Not: return "'not'";
    }
    return "token";
}

const std::unordered_map<std::string_view, Tok>& keywords()
{
    static const std::unordered_map<std::string_view, Tok> table = {
        {"node", Tok::Node}, {"imported", Tok::Imported}, {"returns", Tok::Returns},
        {"var", Tok::Var},   {"let", Tok::Let},           {"tel", Tok::Tel},
        {"fby", Tok::Fby},   {"wcet", Tok::Wcet},         {"rate", Tok::Rate},
        {"due", Tok::Due},   {"true", Tok::True},         {"false", Tok::False},
        {"int", Tok::IntType}, {"bool", Tok::BoolType},   {"and", Tok::And},
        {"or", Tok::Or},     {"not", Tok::Not},
    };
    return table;
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run()
    {
        std::vector<Token> out;
        for (;;) {
            skip_blank();
            Token t;
            t.span.line = line_;
            t.span.column = col_;
            if (pos_ >= src_.size()) {
                t.kind = Tok::End;
                t.span.end_line = line_;
                t.span.end_column = col_;
                out.push_back(t);
                return out;
            }
            char c = src_[pos_];
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t start = pos_;
                while (pos_ < src_.size() &&
                       (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                    advance();
                t.text = std::string(src_.substr(start, pos_ - start));
                auto kw = keywords().find(t.text);
                t.kind = kw == keywords().end() ? Tok::Ident : kw->second;
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                std::size_t start = pos_;
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    advance();
                t.text = std::string(src_.substr(start, pos_ - start));
                t.kind = Tok::Int;
            } else {
                t.kind = punct(t.span);
            }
            t.span.end_line = line_;
            t.span.end_column = col_;
            out.push_back(std::move(t));
        }
    }

private:
    void advance()
    {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    bool peek_is(std::size_t off, char c) const
    {
        return pos_ + off < src_.size() && src_[pos_ + off] == c;
    }

    void skip_blank()
    {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '-' && peek_is(1, '-')) {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else {
                break;
            }
        }
    }

    Tok punct(const Span& at)
    {
        char c = src_[pos_];
        auto two = [&](char next, Tok both, Tok single) {
            advance();
            if (pos_ < src_.size() && src_[pos_] == next) {
                advance();
                return both;
            }
            return single;
        };
        switch (c) {
        case '(': advance(); return Tok::LParen;
        case ')': advance(); return Tok::RParen;
        case ',': advance(); return Tok::Comma;
        case ';': advance(); return Tok::Semi;
        case ':': advance(); return Tok::Colon;
        case '=': advance(); return Tok::Eq;
        case '+': advance(); return Tok::Plus;
        case '-': advance(); return Tok::Minus;
        case '*': return two('^', Tok::Over, Tok::Star);
        case '/': return two('^', Tok::Under, Tok::Slash);
        case '<': return two('=', Tok::Le, Tok::Lt);
        case '>': return two('=', Tok::Ge, Tok::Gt);
        case '~':
            if (peek_is(1, '>')) {
                advance();
                advance();
                return Tok::Offset;
            }
            break;
        default: break;
        }
        throw CompileError(ErrorKind::Syntax, Span{at.line, at.column, at.line, at.column + 1},
                           std::string("unexpected character '") + c + "'");
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    Program program()
    {
        Program p;
        while (!at(Tok::End)) p.nodes.push_back(node_decl());
        return p;
    }

private:
    const Token& cur() const { return toks_[pos_]; }
    const Token& peek(std::size_t off = 1) const
    {
        return toks_[std::min(pos_ + off, toks_.size() - 1)];
    }
    bool at(Tok k) const { return cur().kind == k; }

    Token take()
    {
        Token t = cur();
        if (pos_ + 1 < toks_.size()) ++pos_;
        return t;
    }

    bool accept(Tok k)
    {
        if (!at(k)) return false;
        take();
        return true;
    }

    [[noreturn]] void fail_expected(const char* what) const
    {
        std::string found = cur().kind == Tok::Ident || cur().kind == Tok::Int
                                ? "'" + cur().text + "'"
                                : describe(cur().kind);
        throw CompileError(ErrorKind::Syntax, cur().span,
                           std::string("syntax error: expected ") + what + ", found " + found);
    }

    Token expect(Tok k)
    {
        if (!at(k)) fail_expected(describe(k));
        return take();
    }

    std::int64_t integer(const Token& t)
    {
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc{}) throw CompileError(ErrorKind::Syntax, t.span, "integer literal out of range");
        return v;
    }

    std::int64_t positive_int(const char* what)
    {
        Token t = expect(Tok::Int);
        std::int64_t v = integer(t);
        if (v <= 0) throw CompileError(ErrorKind::Syntax, t.span, std::string(what) + " must be positive");
        return v;
    }

    /// `[-] INT [/ INT]`
    std::pair<Rational, Span> rational()
    {
        Span start = cur().span;
        bool neg = accept(Tok::Minus);
        Token num = expect(Tok::Int);
        std::int64_t n = integer(num);
        std::int64_t d = 1;
        Span end = num.span;
        if (accept(Tok::Slash)) {
            Token den = expect(Tok::Int);
            d = integer(den);
            end = den.span;
            if (d == 0) throw CompileError(ErrorKind::Syntax, den.span, "zero denominator");
        }
        return {Rational(neg ? -n : n, d), cover(start, end)};
    }

    NodeDecl node_decl()
    {
        NodeDecl nd;
        Span start = cur().span;
        if (accept(Tok::Imported)) {
            nd.kind = NodeKind::Imported;
            expect(Tok::Node);
        } else if (accept(Tok::Node)) {
            nd.kind = NodeKind::Defined;
        } else {
            fail_expected("'node' or 'imported'");
        }
        Token name = expect(Tok::Ident);
        nd.name = name.text;
        expect(Tok::LParen);
        nd.inputs = params(Tok::RParen);
        expect(Tok::RParen);
        expect(Tok::Returns);
        expect(Tok::LParen);
        nd.outputs = params(Tok::RParen);
        expect(Tok::RParen);
        if (nd.kind == NodeKind::Imported) {
            expect(Tok::Wcet);
            Token w = expect(Tok::Int);
            nd.wcet = integer(w);
            nd.span = cover(start, w.span);
            expect(Tok::Semi);
            return nd;
        }
        accept(Tok::Semi);
        if (accept(Tok::Var)) {
            while (at(Tok::Ident)) {
                auto group = param_group();
                for (auto& p : group) nd.locals.push_back(std::move(p));
                if (!accept(Tok::Semi)) fail_expected("';'");
            }
        }
        Token let = expect(Tok::Let);
        while (!at(Tok::Tel)) {
            nd.equations.push_back(equation());
            if (!accept(Tok::Semi) && !at(Tok::Tel)) fail_expected("';'");
        }
        Token tel = expect(Tok::Tel);
        accept(Tok::Semi);
        nd.span = cover(start, name.span);
        if (nd.equations.empty())
            throw CompileError(ErrorKind::Structure, cover(let.span, tel.span), "node defines no equation");
        return nd;
    }

    /// Identifiers accumulate until an annotation, which applies to all of them.
    std::vector<Param> param_group()
    {
        std::vector<Param> ids;
        for (;;) {
            Token id = expect(Tok::Ident);
            ids.push_back(Param{id.text, std::nullopt, std::nullopt, std::nullopt, id.span});
            if (at(Tok::Comma) && peek().kind == Tok::Ident) {
                take();
                continue;
            }
            break;
        }
        if (accept(Tok::Colon)) annotate(ids);
        return ids;
    }

    std::vector<Param> params(Tok close)
    {
        std::vector<Param> out;
        if (at(close)) return out;
        for (;;) {
            auto group = param_group();
            for (auto& p : group) out.push_back(std::move(p));
            if (at(close)) break;
            if (!accept(Tok::Comma) && !accept(Tok::Semi)) fail_expected("',' or ';' or ')'");
        }
        return out;
    }

    void annotate(std::vector<Param>& ids)
    {
        bool any = false;
        std::optional<GroundType> type;
        if (accept(Tok::IntType)) {
            type = GroundType::Int;
            any = true;
        } else if (accept(Tok::BoolType)) {
            type = GroundType::Bool;
            any = true;
        }
        std::optional<ClockDecl> clock;
        if (at(Tok::Rate)) {
            Span s = take().span;
            expect(Tok::LParen);
            ClockDecl cd;
            cd.period = positive_int("period");
            expect(Tok::Comma);
            auto [phase, pspan] = rational();
            if (phase < 0)
                throw CompileError(ErrorKind::Syntax, pspan, "phase must be non-negative");
            cd.phase_ratio = phase;
            Token close = expect(Tok::RParen);
            cd.span = cover(s, close.span);
            clock = cd;
            any = true;
        }
        std::optional<std::int64_t> due;
        if (at(Tok::Due)) {
            take();
            Token d = expect(Tok::Int);
            due = integer(d);
            any = true;
        }
        if (!any) fail_expected("type, 'rate' or 'due'");
        for (auto& p : ids) {
            p.type = type;
            p.clock = clock;
            p.due = due;
        }
    }

    Equation equation()
    {
        Equation eq;
        Span start = cur().span;
        bool paren = accept(Tok::LParen);
        for (;;) {
            Token id = expect(Tok::Ident);
            eq.lhs.push_back(id.text);
            eq.lhs_spans.push_back(id.span);
            if (!accept(Tok::Comma)) break;
        }
        if (paren) expect(Tok::RParen);
        expect(Tok::Eq);
        eq.rhs = expression();
        eq.span = cover(start, eq.rhs->span);
        return eq;
    }

    bool literal_ahead() const
    {
        std::size_t off = 0;
        if (cur().kind == Tok::Minus) off = 1;
        Tok k = peek(off).kind;
        if (k == Tok::Int) return true;
        return off == 0 && (k == Tok::True || k == Tok::False);
    }

    std::pair<Literal, Span> literal()
    {
        Span start = cur().span;
        if (at(Tok::True)) return {Literal{true}, take().span};
        if (at(Tok::False)) return {Literal{false}, take().span};
        bool neg = accept(Tok::Minus);
        Token t = expect(Tok::Int);
        std::int64_t v = integer(t);
        return {Literal{neg ? -v : v}, cover(start, t.span)};
    }

    ExprPtr expression()
    {
        if (literal_ahead()) {
            std::size_t save = pos_;
            auto [lit, span] = literal();
            if (at(Tok::Fby)) {
                take();
                ExprPtr body = expression();
                return make_expr<expr::Fby>(cover(span, body->span), lit, body);
            }
            pos_ = save;
        }
        return or_expr();
    }

    ExprPtr binary_chain(const std::function<ExprPtr()>& next,
                         std::initializer_list<std::pair<Tok, BinaryOp>> ops, bool chain = true)
    {
        ExprPtr lhs = next();
        for (;;) {
            bool matched = false;
            for (auto [tok, op] : ops) {
                if (at(tok)) {
                    take();
                    ExprPtr rhs = next();
                    lhs = make_expr<expr::Binary>(cover(lhs->span, rhs->span), op, lhs, rhs);
                    matched = true;
                    break;
                }
            }
            if (!matched || !chain) return lhs;
        }
    }

    ExprPtr or_expr()
    {
        return binary_chain([this] { return and_expr(); }, {{Tok::Or, BinaryOp::Or}});
    }
    ExprPtr and_expr()
    {
        return binary_chain([this] { return not_expr(); }, {{Tok::And, BinaryOp::And}});
    }
    ExprPtr not_expr()
    {
        if (at(Tok::Not)) {
            Span s = take().span;
            ExprPtr body = not_expr();
            return make_expr<expr::Unary>(cover(s, body->span), UnaryOp::Not, body);
        }
        return cmp_expr();
    }
    ExprPtr cmp_expr()
    {
        return binary_chain([this] { return add_expr(); },
                            {{Tok::Lt, BinaryOp::Lt}, {Tok::Le, BinaryOp::Le},
                             {Tok::Gt, BinaryOp::Gt}, {Tok::Ge, BinaryOp::Ge}},
                            false);
    }
    ExprPtr add_expr()
    {
        return binary_chain([this] { return mul_expr(); },
                            {{Tok::Plus, BinaryOp::Add}, {Tok::Minus, BinaryOp::Sub}});
    }
    ExprPtr mul_expr()
    {
        return binary_chain([this] { return unary(); }, {{Tok::Star, BinaryOp::Mul}});
    }

    ExprPtr unary()
    {
        if (at(Tok::Minus)) {
            Span s = cur().span;
            if (peek().kind == Tok::Int) return postfix(primary());
            take();
            ExprPtr body = unary();
            return make_expr<expr::Unary>(cover(s, body->span), UnaryOp::Neg, body);
        }
        return postfix(primary());
    }

    ExprPtr postfix(ExprPtr e)
    {
        for (;;) {
            if (at(Tok::Under) || at(Tok::Over)) {
                bool under = take().kind == Tok::Under;
                Span ks = cur().span;
                std::int64_t k = positive_int("rate factor");
                Span s = cover(e->span, ks);
                e = under ? make_expr<expr::Under>(s, e, k) : make_expr<expr::Over>(s, e, k);
            } else if (at(Tok::Offset)) {
                take();
                auto [q, qspan] = rational();
                if (q < 0)
                    throw CompileError(ErrorKind::Syntax, qspan, "phase offset must be non-negative");
                e = make_expr<expr::Offset>(cover(e->span, qspan), e, q);
            } else {
                return e;
            }
        }
    }

    ExprPtr primary()
    {
        if (at(Tok::Int) || at(Tok::True) || at(Tok::False) || at(Tok::Minus)) {
            auto [lit, span] = literal();
            return make_expr<expr::Const>(span, lit);
        }
        if (at(Tok::Ident)) {
            Token id = take();
            if (!at(Tok::LParen)) return make_expr<expr::Var>(id.span, id.text);
            take();
            std::vector<ExprPtr> args;
            if (!at(Tok::RParen)) {
                for (;;) {
                    args.push_back(expression());
                    if (!accept(Tok::Comma)) break;
                }
            }
            Token close = expect(Tok::RParen);
            return make_expr<expr::App>(cover(id.span, close.span), id.text, std::move(args), id.span);
        }
        if (at(Tok::LParen)) {
            Span s = take().span;
            std::vector<ExprPtr> items;
            for (;;) {
                items.push_back(expression());
                if (!accept(Tok::Comma)) break;
            }
            Token close = expect(Tok::RParen);
            if (items.size() == 1) return items.front();
            return make_expr<expr::Tuple>(cover(s, close.span), std::move(items));
        }
        fail_expected("expression");
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Structural validation

void check_expr(const Expr& e, const NodeDecl& nd, const std::set<std::string>& nodes)
{
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, expr::Var>) {
                if (!nd.find_var(n.name))
                    throw CompileError(ErrorKind::Structure, e.span, "undeclared variable '" + n.name + "'");
            } else if constexpr (std::is_same_v<T, expr::App>) {
                if (!nodes.count(n.node))
                    throw CompileError(ErrorKind::Structure, n.name_span, "unknown node '" + n.node + "'");
                for (const auto& a : n.args) check_expr(*a, nd, nodes);
            } else if constexpr (std::is_same_v<T, expr::Tuple>) {
                for (const auto& a : n.items) check_expr(*a, nd, nodes);
            } else if constexpr (std::is_same_v<T, expr::Binary>) {
                check_expr(*n.lhs, nd, nodes);
                check_expr(*n.rhs, nd, nodes);
            } else if constexpr (std::is_same_v<T, expr::Const>) {
            } else {
                check_expr(*n.body, nd, nodes);
            }
        },
        e.node);
}

void validate_params(const NodeDecl& nd, std::set<std::string>& seen)
{
    auto add = [&](const Param& p) {
        if (!seen.insert(p.name).second)
            throw CompileError(ErrorKind::Structure, p.span,
                               "duplicate variable '" + p.name + "' in node " + nd.name);
    };
    for (const auto& p : nd.inputs) {
        add(p);
        if (p.due)
            throw CompileError(ErrorKind::Structure, p.span, "deadline 'due' is only allowed on outputs");
    }
    for (const auto& p : nd.outputs) {
        add(p);
        if (p.due && p.clock && *p.due > p.clock->period)
            throw CompileError(ErrorKind::Structure, p.span,
                               "deadline of '" + p.name + "' exceeds its declared period");
    }
    for (const auto& p : nd.locals) {
        add(p);
        if (p.due)
            throw CompileError(ErrorKind::Structure, p.span, "deadline 'due' is only allowed on outputs");
    }
}

void validate(Program& p, const ParseOptions& options)
{
    std::set<std::string> names;
    for (const auto& nd : p.nodes) {
        if (!names.insert(nd.name).second)
            throw CompileError(ErrorKind::Structure, nd.span, "duplicate node name '" + nd.name + "'");
    }
    for (const auto& nd : p.nodes) {
        std::set<std::string> vars;
        validate_params(nd, vars);
        if (nd.kind == NodeKind::Imported) continue;
        std::set<std::string> defined;
        for (const auto& eq : nd.equations) {
            for (std::size_t i = 0; i < eq.lhs.size(); ++i) {
                const std::string& x = eq.lhs[i];
                const Param* v = nd.find_var(x);
                if (!v)
                    throw CompileError(ErrorKind::Structure, eq.lhs_spans[i], "undeclared variable '" + x + "'");
                bool is_input = std::any_of(nd.inputs.begin(), nd.inputs.end(),
                                            [&](const Param& in) { return in.name == x; });
                if (is_input)
                    throw CompileError(ErrorKind::Structure, eq.lhs_spans[i],
                                       "cannot define input '" + x + "'");
                if (!defined.insert(x).second)
                    throw CompileError(ErrorKind::Structure, eq.lhs_spans[i],
                                       "duplicate equation for '" + x + "'");
            }
            check_expr(*eq.rhs, nd, names);
        }
        auto require = [&](const Param& v) {
            if (!defined.count(v.name))
                throw CompileError(ErrorKind::Structure, v.span, "no equation defines '" + v.name + "'");
        };
        for (const auto& v : nd.outputs) require(v);
        for (const auto& v : nd.locals) require(v);
    }

    if (!options.main.empty()) {
        p.main = options.main;
    } else {
        for (const auto& nd : p.nodes)
            if (nd.kind == NodeKind::Defined) p.main = nd.name;
    }
    const NodeDecl* m = p.main.empty() ? nullptr : p.find(p.main);
    if (!m) throw CompileError(ErrorKind::Structure, Span{}, "main node not found");
    if (m->kind != NodeKind::Defined)
        throw CompileError(ErrorKind::Structure, m->span, "main node '" + p.main + "' must be a defined node");
}

}  // namespace

Program parse(std::string_view source, const ParseOptions& options)
{
    Parser parser(Lexer(source).run());
    Program p = parser.program();
    validate(p, options);
    return p;
}

}  // namespace mps
