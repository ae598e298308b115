#include <bits/stdc++.h>
using namespace std;

int main() {
    int n;
    string s;
    cin >> n >> s;
    string out;
    int i = 0;
    while (i < n) {
        int len = (n - i == 3) ? 3 : 2;
        if (!out.empty()) out += '-';
        out += s.substr(i, len);
        i += len;
    }
    cout << out << "\n";
}
