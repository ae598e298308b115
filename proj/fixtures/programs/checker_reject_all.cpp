// Rigid checker: nothing is ever accepted.
#include "testlib.h"

int main(int argc, char* argv[]) {
    registerTestlibCmd(argc, argv);
    quitf(_wa, "never");
}
