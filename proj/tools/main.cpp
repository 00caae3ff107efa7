#include <cstdlib>
#include <iostream>
#include <string>
#include <string_view>
#include <vector>

#include "polarization/cli.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  const char* color = std::getenv("POLARIZATION_COLOR");
  polar::cli::RunContext ctx;
  ctx.color = color != nullptr && std::string_view(color) == "1";
  return polar::cli::main(std::vector<std::string>(argv, argv + argc), std::cin, std::cout,
                                 std::cerr, ctx);
}
