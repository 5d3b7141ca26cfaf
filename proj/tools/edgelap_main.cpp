#include <iostream>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "cli/config.hpp"

int main(int argc, char** argv) {
  using namespace edgelap::cli;
  const std::vector<std::string> args(argv + 1, argv + argc);
  RunConfig config;
  try {
    config = parse_config(args);
  } catch (const HelpRequested& h) {
    std::cout << h.what();
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "edgelap: " << e.what() << "\n";
    std::cout << usage_error_summary(args, e.what());
    return 2;
  }
  return run(config);
}
