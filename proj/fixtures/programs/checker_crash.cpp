// Dies on every call.
#include <cstdlib>
int main() { std::abort(); }
