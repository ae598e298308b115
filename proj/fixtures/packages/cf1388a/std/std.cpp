#include <bits/stdc++.h>
using namespace std;

int main() {
    int t;
    scanf("%d", &t);
    while (t--) {
        int n;
        scanf("%d", &n);
        if (n <= 30) {
            puts("NO");
            continue;
        }
        int x = n - 30;
        if (x == 6 || x == 10 || x == 14)
            printf("YES\n6 10 15 %d\n", n - 31);
        else
            printf("YES\n6 10 14 %d\n", x);
    }
}
