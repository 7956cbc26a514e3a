#include <cstdio>

int main() {
  std::puts("geotri: command-line interface under construction");
  return 64;
}
