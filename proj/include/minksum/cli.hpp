#pragma once

#include <iostream>

namespace mink {

/// Exit status: 0 success, 1 threshold failure or runtime error, 2 usage or input-format error.
int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout,
            std::ostream& err = std::cerr);

}  // namespace mink
