#include <bits/stdc++.h>
using namespace std;

int main() {
    int t;
    cin >> t;
    while (t--) {
        int n;
        cin >> n;
        if (n < 31) {
            cout << "NO\n";
        } else {
            cout << "YES\n";
            cout << "6 10 14 " << n - 30 << "\n";
        }
    }
}
