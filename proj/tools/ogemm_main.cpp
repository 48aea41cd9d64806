#include <iostream>

int main() {
    std::cout << "ogemm cli placeholder\n";
    return 0;
}
