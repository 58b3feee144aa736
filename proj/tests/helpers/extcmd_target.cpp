// Test helper for the external-command adapter. Reads the payload (stdin, or
// a file when given as argv[1]), writes a probe report to $SEMFUZZ_PROBE_OUT,
// then crashes on 'C', sleeps on 'S', exits 3 on 'E', else exits 0.
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <string>

int main(int argc, char** argv) {
  std::string payload;
  if (argc > 1) {
    std::ifstream in(argv[1], std::ios::binary);
    payload.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>{});
  } else {
    payload.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>{});
  }

  if (const char* report_path = std::getenv("SEMFUZZ_PROBE_OUT")) {
    std::ofstream report(report_path);
    report << "function:1\n";
    report << "line:10\n";
    if (!payload.empty()) report << "branch:20\n";
    if (payload.size() > 4) report << "branch:21\n";
    report << "function:1\n";  // repeat: set vs edge-count semantics
  }

  if (!payload.empty()) {
    switch (payload[0]) {
      case 'C':
        std::abort();
      case 'S':
        ::sleep(10);
        break;
      case 'E':
        return 3;
      default:
        break;
    }
  }
  return 0;
}
