// Rejects every input.
#include <cstdio>
int main() {
    std::fputs("nothing is valid here\n", stderr);
    return 1;
}
