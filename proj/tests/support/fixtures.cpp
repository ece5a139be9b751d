#include "support/fixtures.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mps::fixtures {

std::string read_program(const std::string& relative)
{
    std::ifstream in(std::string(MPS_PROGRAMS_DIR) + "/" + relative);
    if (!in) throw std::runtime_error("missing fixture " + relative);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace mps::fixtures
