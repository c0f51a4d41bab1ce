#include "rsdlab/majorization.hpp"

#include <algorithm>
#include <functional>

namespace rsdlab {

bool majorizes(const std::vector<Rat>& x, const std::vector<Rat>& y) {
    if (x.size() != y.size()) return false;
    auto xs = x, ys = y;
    std::sort(xs.begin(), xs.end(), std::greater<Rat>());
    std::sort(ys.begin(), ys.end(), std::greater<Rat>());
    Rat px(0), py(0);
    for (size_t i = 0; i < xs.size(); ++i) {
        px += xs[i];
        py += ys[i];
        if (px < py) return false;
    }
    return px == py;
}

bool majorizes(const std::vector<double>& x, const std::vector<double>& y, double tol) {
    if (x.size() != y.size()) return false;
    auto xs = x, ys = y;
    std::sort(xs.begin(), xs.end(), std::greater<double>());
    std::sort(ys.begin(), ys.end(), std::greater<double>());
    double px = 0, py = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        px += xs[i];
        py += ys[i];
        if (px < py - tol) return false;
    }
    return std::abs(px - py) <= tol;
}

} // namespace rsdlab
