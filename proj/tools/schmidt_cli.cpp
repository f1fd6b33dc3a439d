#include <cstdio>

int main() {
  std::puts("schmidt cli placeholder");
  return 1;
}
