#include <cstdio>

int main() {
    int n, best = 0;
    if (scanf("%d", &n) != 1) return 1;
    for (int i = 0; i < n; i++) {
        int x;
        if (scanf("%d", &x) != 1) return 1;
        if (x > best) best = x;
    }
    printf("%d\n", best);
}
