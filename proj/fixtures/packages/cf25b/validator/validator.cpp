#include "testlib.h"

int main(int argc, char* argv[]) {
    registerValidation(argc, argv);
    int n = inf.readInt(2, 100, "n");
    inf.readEoln();
    inf.readToken(format("[0-9]{%d}", n), "digits");
    inf.readEoln();
    inf.readEof();
}
