#pragma once

#include <array>
#include <cmath>

namespace hypmono {

// Forward-mode dual number carrying N directional derivatives.
template <int N>
struct Dual {
    double v = 0.0;
    std::array<double, N> d{};

    Dual() = default;
    Dual(double x) : v(x) {}  // NOLINT: implicit lift of constants

    static Dual variable(double x, int k) {
        Dual r(x);
        r.d[k] = 1.0;
        return r;
    }

    Dual& operator+=(const Dual& o) {
        v += o.v;
        for (int k = 0; k < N; ++k) d[k] += o.d[k];
        return *this;
    }
    Dual& operator-=(const Dual& o) {
        v -= o.v;
        for (int k = 0; k < N; ++k) d[k] -= o.d[k];
        return *this;
    }
    Dual& operator*=(const Dual& o) {
        for (int k = 0; k < N; ++k) d[k] = d[k] * o.v + v * o.d[k];
        v *= o.v;
        return *this;
    }
    Dual& operator/=(const Dual& o) {
        const double inv = 1.0 / o.v;
        for (int k = 0; k < N; ++k) d[k] = (d[k] - v * inv * o.d[k]) * inv;
        v *= inv;
        return *this;
    }
};

template <int N> Dual<N> operator-(Dual<N> a) {
    a.v = -a.v;
    for (auto& x : a.d) x = -x;
    return a;
}
template <int N> Dual<N> operator+(Dual<N> a, const Dual<N>& b) { return a += b; }
template <int N> Dual<N> operator-(Dual<N> a, const Dual<N>& b) { return a -= b; }
template <int N> Dual<N> operator*(Dual<N> a, const Dual<N>& b) { return a *= b; }
template <int N> Dual<N> operator/(Dual<N> a, const Dual<N>& b) { return a /= b; }
template <int N> Dual<N> operator+(Dual<N> a, double b) { a.v += b; return a; }
template <int N> Dual<N> operator+(double b, Dual<N> a) { a.v += b; return a; }
template <int N> Dual<N> operator-(Dual<N> a, double b) { a.v -= b; return a; }
template <int N> Dual<N> operator-(double b, const Dual<N>& a) { return -a + b; }
template <int N> Dual<N> operator*(Dual<N> a, double b) {
    a.v *= b;
    for (auto& x : a.d) x *= b;
    return a;
}
template <int N> Dual<N> operator*(double b, Dual<N> a) { return a * b; }
template <int N> Dual<N> operator/(Dual<N> a, double b) { return a * (1.0 / b); }
template <int N> Dual<N> operator/(double b, const Dual<N>& a) { return Dual<N>(b) / a; }

template <int N> bool operator<(const Dual<N>& a, double b) { return a.v < b; }
template <int N> bool operator>(const Dual<N>& a, double b) { return a.v > b; }

namespace detail {
template <int N>
Dual<N> chain(const Dual<N>& a, double f, double df) {
    Dual<N> r(f);
    for (int k = 0; k < N; ++k) r.d[k] = df * a.d[k];
    return r;
}
}  // namespace detail

template <int N> Dual<N> sin(const Dual<N>& a) { return detail::chain(a, std::sin(a.v), std::cos(a.v)); }
template <int N> Dual<N> cos(const Dual<N>& a) { return detail::chain(a, std::cos(a.v), -std::sin(a.v)); }
template <int N> Dual<N> sinh(const Dual<N>& a) { return detail::chain(a, std::sinh(a.v), std::cosh(a.v)); }
template <int N> Dual<N> cosh(const Dual<N>& a) { return detail::chain(a, std::cosh(a.v), std::sinh(a.v)); }
template <int N> Dual<N> tanh(const Dual<N>& a) {
    const double t = std::tanh(a.v);
    return detail::chain(a, t, 1.0 - t * t);
}
template <int N> Dual<N> exp(const Dual<N>& a) {
    const double e = std::exp(a.v);
    return detail::chain(a, e, e);
}
template <int N> Dual<N> expm1(const Dual<N>& a) { return detail::chain(a, std::expm1(a.v), std::exp(a.v)); }
template <int N> Dual<N> log(const Dual<N>& a) { return detail::chain(a, std::log(a.v), 1.0 / a.v); }
template <int N> Dual<N> log1p(const Dual<N>& a) { return detail::chain(a, std::log1p(a.v), 1.0 / (1.0 + a.v)); }
template <int N> Dual<N> sqrt(const Dual<N>& a) {
    const double s = std::sqrt(a.v);
    return detail::chain(a, s, 0.5 / s);
}
template <int N> Dual<N> asinh(const Dual<N>& a) {
    return detail::chain(a, std::asinh(a.v), 1.0 / std::sqrt(1.0 + a.v * a.v));
}
template <int N> Dual<N> atan2(const Dual<N>& y, const Dual<N>& x) {
    const double den = x.v * x.v + y.v * y.v;
    Dual<N> r(std::atan2(y.v, x.v));
    for (int k = 0; k < N; ++k) r.d[k] = (x.v * y.d[k] - y.v * x.d[k]) / den;
    return r;
}

inline double value(double x) { return x; }
template <int N> double value(const Dual<N>& x) { return x.v; }

using Dual3 = Dual<3>;

}  // namespace hypmono
