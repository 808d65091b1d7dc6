#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace hypmono {

// su(2) element as coefficients on an orthonormal basis e1, e2, e3 with
// [e1, e2] = e3 (cyclic), i.e. the bracket is the cross product.
template <class T>
struct Alg {
    std::array<T, 3> c{};

    Alg() = default;
    Alg(T a, T b, T d) : c{a, b, d} {}

    T& operator[](int i) { return c[i]; }
    const T& operator[](int i) const { return c[i]; }

    Alg& operator+=(const Alg& o) {
        for (int i = 0; i < 3; ++i) c[i] += o.c[i];
        return *this;
    }
    Alg& operator-=(const Alg& o) {
        for (int i = 0; i < 3; ++i) c[i] -= o.c[i];
        return *this;
    }
    template <class S>
    Alg& operator*=(const S& s) {
        for (int i = 0; i < 3; ++i) c[i] = c[i] * s;
        return *this;
    }
};

using AlgebraElement = Alg<double>;

template <class T> Alg<T> operator+(Alg<T> a, const Alg<T>& b) { return a += b; }
template <class T> Alg<T> operator-(Alg<T> a, const Alg<T>& b) { return a -= b; }
template <class T> Alg<T> operator-(Alg<T> a) {
    for (auto& x : a.c) x = -x;
    return a;
}
template <class T, class S> Alg<T> operator*(Alg<T> a, const S& s) { return a *= s; }
template <class T, class S> Alg<T> operator*(const S& s, Alg<T> a) { return a *= s; }

template <class T> Alg<T> basis(int i) {
    Alg<T> e;
    e.c = {T(0.0), T(0.0), T(0.0)};
    e.c[i] = T(1.0);
    return e;
}

template <class T>
Alg<T> bracket(const Alg<T>& u, const Alg<T>& v) {
    return Alg<T>(u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]);
}

template <class T>
T inner(const Alg<T>& u, const Alg<T>& v) {
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
}

inline double norm(const Alg<double>& u) { return std::sqrt(inner(u, u)); }

inline Alg<double> value_of(const Alg<double>& a) { return a; }
template <class T>
Alg<double> value_of(const Alg<T>& a) {
    return Alg<double>(a[0].v, a[1].v, a[2].v);
}

// Pointwise sample of a pair (psi, b) in Lambda^0 + Lambda^1; form components
// are on the coordinate coframe (dr, dtheta, dchi).
struct PairSample {
    AlgebraElement psi;
    std::array<AlgebraElement, 3> b;
};

using PairField = std::vector<PairSample>;

inline PairSample ad_action(const AlgebraElement& phi0, const PairSample& p) {
    PairSample out;
    out.psi = bracket(phi0, p.psi);
    for (int mu = 0; mu < 3; ++mu) out.b[mu] = bracket(phi0, p.b[mu]);
    return out;
}

inline PairField ad_action(const std::vector<AlgebraElement>& phi0, const PairField& pair) {
    if (phi0.size() != pair.size()) throw std::invalid_argument("ad_action: shape mismatch");
    PairField out(pair.size());
    for (std::size_t n = 0; n < pair.size(); ++n) out[n] = ad_action(phi0[n], pair[n]);
    return out;
}

}  // namespace hypmono
