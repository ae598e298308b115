#include "testlib.h"
#include <cstdio>

int main(int argc, char* argv[]) {
    registerGen(argc, argv);
    int t = rnd.next(1, 5);
    printf("%d\n", t);
    for (int i = 0; i < t; i++) printf("%lld\n", rnd.next(1LL, 200000LL));
}
