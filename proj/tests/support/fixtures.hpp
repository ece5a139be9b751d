#pragma once

#include <string>

namespace mps::fixtures {

std::string read_program(const std::string& relative);

}  // namespace mps::fixtures
