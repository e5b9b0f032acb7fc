#pragma once

// Composite Simpson rule on a fine grid, independent of the integrators'
// own energy bookkeeping.

#include <cstddef>
#include <stdexcept>

namespace oracle {

template <class F>
double simpson(F&& f, double a, double b, std::size_t panels) {
    if (panels == 0 || panels % 2 != 0) {
        throw std::invalid_argument("simpson needs an even, positive panel count");
    }
    const double h = (b - a) / static_cast<double>(panels);
    double sum = f(a) + f(b);
    for (std::size_t i = 1; i < panels; ++i) {
        sum += (i % 2 ? 4.0 : 2.0) * f(a + h * static_cast<double>(i));
    }
    return sum * h / 3.0;
}

}  // namespace oracle
