// placeholder main; real CLI lands with the experiments module
#include <iostream>

int main() {
  std::cout << "nok cli\n";
  return 0;
}
