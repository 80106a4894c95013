#include "cli.hpp"

int main(int argc, char** argv) {
  return talkprofiler::cli::run(argc, argv);
}
