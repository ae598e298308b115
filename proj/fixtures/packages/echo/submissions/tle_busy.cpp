#include <iostream>

int main() {
    long long x;
    std::cin >> x;
    volatile unsigned long long spin = 0;
    for (;;) spin = spin + 1;
    std::cout << x << "\n";
}
