#pragma once

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>

namespace sblab::test {

struct Harness {
    int passed = 0;
    int failed = 0;

    void record(const std::string& name, bool ok, const std::string& detail = "") {
        if (ok)
            ++passed;
        else
            ++failed;
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << name;
        if (!detail.empty()) std::cout << "  (" << detail << ")";
        std::cout << "\n";
    }

    int summary(const char* suite) const {
        std::cout << "\n" << suite << ": " << passed << " passed, " << failed << " failed\n";
        return failed == 0 ? 0 : 1;
    }
};

inline Harness& harness() {
    static Harness h;
    return h;
}

inline void record(const std::string& name, bool ok, const std::string& detail = "") {
    harness().record(name, ok, detail);
}

inline int summary(const char* suite) { return harness().summary(suite); }

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

inline bool close_rel(double a, double b, double tol) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return std::abs(a - b) <= tol * (scale > 0.0 ? scale : 1.0);
}

inline bool close_abs(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace sblab::test
