#include <iostream>
#include <string>
#include <vector>

#include "rmat/suite.hpp"

namespace {

void usage(std::ostream& os) {
  os << "usage: rmat verify [options]   (rmat verify --help for the option list)\n"
        "       rmat --version\n";
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty()) {
    usage(std::cerr);
    return rmat::kExitConfigError;
  }
  const std::string command = args.front();
  if (command == "--version") {
    std::cout << "rmat " << RMAT_VERSION << "\n";
    return rmat::kExitPass;
  }
  if (command == "-h" || command == "--help") {
    usage(std::cout);
    return rmat::kExitPass;
  }
  if (command != "verify") {
    std::cerr << "unknown command '" << command << "'\n";
    usage(std::cerr);
    return rmat::kExitConfigError;
  }
  args.erase(args.begin());
  return rmat::run_verify_command(args, std::cout, std::cerr);
}
