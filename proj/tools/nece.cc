#include <iostream>
#include <string>
#include <vector>

#include "nece/cli.h"

#ifndef NECE_DEFAULT_DATA_DIR
#define NECE_DEFAULT_DATA_DIR "data"
#endif

int main(int argc, char *argv[]) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return nece::RunCli(args, std::cout, std::cerr, NECE_DEFAULT_DATA_DIR);
}
