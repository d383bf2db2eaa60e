// Small fixed-size linear algebra used throughout the engine.
// All types are templated on the scalar so that every pipeline can run in
// f32 (speed) or f64 (verification) mode.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace gsavatar {

template <class T>
struct Vec2 {
  T x = 0, y = 0;

  Vec2() = default;
  Vec2(T x_, T y_) : x(x_), y(y_) {}

  T& operator[](int i) { return i == 0 ? x : y; }
  T operator[](int i) const { return i == 0 ? x : y; }

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(T s) const { return {x * s, y * s}; }
  Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
};

template <class T>
struct Vec3 {
  T x = 0, y = 0, z = 0;

  Vec3() = default;
  Vec3(T x_, T y_, T z_) : x(x_), y(y_), z(z_) {}

  T& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  T operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3 operator*(T s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(T s) const { return {x / s, y / s, z / s}; }
  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  Vec3& operator*=(T s) { x *= s; y *= s; z *= s; return *this; }
};

template <class T>
inline Vec3<T> operator*(T s, const Vec3<T>& v) { return v * s; }

template <class T>
inline T dot(const Vec2<T>& a, const Vec2<T>& b) { return a.x * b.x + a.y * b.y; }

template <class T>
inline T dot(const Vec3<T>& a, const Vec3<T>& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

template <class T>
inline Vec3<T> cross(const Vec3<T>& a, const Vec3<T>& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

template <class T>
inline T norm(const Vec3<T>& v) { return std::sqrt(dot(v, v)); }

template <class T>
inline T norm(const Vec2<T>& v) { return std::sqrt(dot(v, v)); }

template <class T>
inline Vec3<T> normalize(const Vec3<T>& v) {
  T n = norm(v);
  return n > 0 ? v / n : Vec3<T>{0, 0, 0};
}

// d(normalize(v))/dv applied to an upstream gradient on the unit vector.
template <class T>
inline Vec3<T> normalize_vjp(const Vec3<T>& v, const Vec3<T>& unit_bar) {
  T n = norm(v);
  if (n <= 0) return {0, 0, 0};
  Vec3<T> u = v / n;
  return (unit_bar - u * dot(u, unit_bar)) / n;
}

// Row-major 3x3 matrix.
template <class T>
struct Mat3 {
  std::array<T, 9> m{};  // m[3*r + c]

  static Mat3 identity() {
    Mat3 r;
    r.m = {1, 0, 0, 0, 1, 0, 0, 0, 1};
    return r;
  }
  static Mat3 zero() { return Mat3{}; }

  T& operator()(int r, int c) { return m[3 * r + c]; }
  T operator()(int r, int c) const { return m[3 * r + c]; }

  Vec3<T> col(int c) const { return {m[c], m[3 + c], m[6 + c]}; }
  Vec3<T> row(int r) const { return {m[3 * r], m[3 * r + 1], m[3 * r + 2]}; }
  void set_col(int c, const Vec3<T>& v) { m[c] = v.x; m[3 + c] = v.y; m[6 + c] = v.z; }

  Mat3 operator+(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.m[i] = m[i] + o.m[i];
    return r;
  }
  Mat3 operator-(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.m[i] = m[i] - o.m[i];
    return r;
  }
  Mat3 operator*(T s) const {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.m[i] = m[i] * s;
    return r;
  }
  Mat3& operator+=(const Mat3& o) {
    for (int i = 0; i < 9; ++i) m[i] += o.m[i];
    return *this;
  }

  Vec3<T> operator*(const Vec3<T>& v) const {
    return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
            m[3] * v.x + m[4] * v.y + m[5] * v.z,
            m[6] * v.x + m[7] * v.y + m[8] * v.z};
  }
  Mat3 operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        T s = 0;
        for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
        r(i, j) = s;
      }
    return r;
  }
  Mat3 transposed() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
    return r;
  }
};

// y = M v  =>  M_bar += y_bar v^T, v_bar += M^T y_bar
template <class T>
inline Mat3<T> outer(const Vec3<T>& a, const Vec3<T>& b) {
  Mat3<T> r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = a[i] * b[j];
  return r;
}

template <class T>
inline Vec3<T> mul_transposed(const Mat3<T>& M, const Vec3<T>& v) {
  return {M(0, 0) * v.x + M(1, 0) * v.y + M(2, 0) * v.z,
          M(0, 1) * v.x + M(1, 1) * v.y + M(2, 1) * v.z,
          M(0, 2) * v.x + M(1, 2) * v.y + M(2, 2) * v.z};
}

// Unit quaternion, stored wxyz.
template <class T>
struct Quat {
  T w = 1, x = 0, y = 0, z = 0;

  Quat() = default;
  Quat(T w_, T x_, T y_, T z_) : w(w_), x(x_), y(y_), z(z_) {}

  static Quat identity() { return {1, 0, 0, 0}; }

  T& operator[](int i) { return i == 0 ? w : (i == 1 ? x : (i == 2 ? y : z)); }
  T operator[](int i) const { return i == 0 ? w : (i == 1 ? x : (i == 2 ? y : z)); }

  Quat conjugate() const { return {w, -x, -y, -z}; }
  T norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }
  Quat normalized() const {
    T n = norm();
    return n > 0 ? Quat{w / n, x / n, y / n, z / n} : identity();
  }
};

template <class T>
inline Quat<T> qmul(const Quat<T>& a, const Quat<T>& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

// Adjoints of c = qmul(a, b) given c_bar.
template <class T>
inline void qmul_vjp(const Quat<T>& a, const Quat<T>& b, const Quat<T>& c_bar,
                     Quat<T>& a_bar, Quat<T>& b_bar) {
  // c = L(a) b, so b_bar += L(a)^T c_bar; c = R(b) a, so a_bar += R(b)^T c_bar.
  a_bar.w += c_bar.w * b.w + c_bar.x * b.x + c_bar.y * b.y + c_bar.z * b.z;
  a_bar.x += -c_bar.w * b.x + c_bar.x * b.w - c_bar.y * b.z + c_bar.z * b.y;
  a_bar.y += -c_bar.w * b.y + c_bar.x * b.z + c_bar.y * b.w - c_bar.z * b.x;
  a_bar.z += -c_bar.w * b.z - c_bar.x * b.y + c_bar.y * b.x + c_bar.z * b.w;

  b_bar.w += c_bar.w * a.w + c_bar.x * a.x + c_bar.y * a.y + c_bar.z * a.z;
  b_bar.x += -c_bar.w * a.x + c_bar.x * a.w + c_bar.y * a.z - c_bar.z * a.y;
  b_bar.y += -c_bar.w * a.y - c_bar.x * a.z + c_bar.y * a.w + c_bar.z * a.x;
  b_bar.z += -c_bar.w * a.z + c_bar.x * a.y - c_bar.y * a.x + c_bar.z * a.w;
}

// Rotation matrix from a quaternion. Normalizes internally so that gradients
// with respect to raw (possibly non-unit) quaternion storage are well defined.
template <class T>
inline Mat3<T> quat_to_mat(const Quat<T>& q_raw) {
  Quat<T> q = q_raw.normalized();
  T w = q.w, x = q.x, y = q.y, z = q.z;
  Mat3<T> R;
  R(0, 0) = 1 - 2 * (y * y + z * z);
  R(0, 1) = 2 * (x * y - w * z);
  R(0, 2) = 2 * (x * z + w * y);
  R(1, 0) = 2 * (x * y + w * z);
  R(1, 1) = 1 - 2 * (x * x + z * z);
  R(1, 2) = 2 * (y * z - w * x);
  R(2, 0) = 2 * (x * z - w * y);
  R(2, 1) = 2 * (y * z + w * x);
  R(2, 2) = 1 - 2 * (x * x + y * y);
  return R;
}

// Accumulates d quat_to_mat / d q_raw applied to R_bar into q_bar.
template <class T>
inline void quat_to_mat_vjp(const Quat<T>& q_raw, const Mat3<T>& R_bar, Quat<T>& q_bar) {
  Quat<T> q = q_raw.normalized();
  T w = q.w, x = q.x, y = q.y, z = q.z;
  // Gradient w.r.t. the normalized quaternion first.
  Quat<T> g{0, 0, 0, 0};
  g.w += 2 * (-z * R_bar(0, 1) + y * R_bar(0, 2) + z * R_bar(1, 0) - x * R_bar(1, 2) -
              y * R_bar(2, 0) + x * R_bar(2, 1));
  g.x += 2 * (y * R_bar(0, 1) + z * R_bar(0, 2) + y * R_bar(1, 0) - 2 * x * R_bar(1, 1) -
              w * R_bar(1, 2) + z * R_bar(2, 0) + w * R_bar(2, 1) - 2 * x * R_bar(2, 2));
  g.y += 2 * (-2 * y * R_bar(0, 0) + x * R_bar(0, 1) + w * R_bar(0, 2) + x * R_bar(1, 0) +
              z * R_bar(1, 2) - w * R_bar(2, 0) + z * R_bar(2, 1) - 2 * y * R_bar(2, 2));
  g.z += 2 * (-2 * z * R_bar(0, 0) - w * R_bar(0, 1) + x * R_bar(0, 2) + w * R_bar(1, 0) -
              2 * z * R_bar(1, 1) + y * R_bar(1, 2) + x * R_bar(2, 0) + y * R_bar(2, 1));
  // Chain through normalization: q = q_raw / |q_raw|.
  T n = q_raw.norm();
  if (n <= 0) return;
  T qdotg = q.w * g.w + q.x * g.x + q.y * g.y + q.z * g.z;
  q_bar.w += (g.w - q.w * qdotg) / n;
  q_bar.x += (g.x - q.x * qdotg) / n;
  q_bar.y += (g.y - q.y * qdotg) / n;
  q_bar.z += (g.z - q.z * qdotg) / n;
}

// Shepperd-style rotation matrix to quaternion (assumes M is orthonormal).
template <class T>
inline Quat<T> mat_to_quat(const Mat3<T>& M) {
  T tr = M(0, 0) + M(1, 1) + M(2, 2);
  Quat<T> q;
  if (tr > 0) {
    T s = std::sqrt(tr + 1) * 2;  // s = 4w
    q.w = s / 4;
    q.x = (M(2, 1) - M(1, 2)) / s;
    q.y = (M(0, 2) - M(2, 0)) / s;
    q.z = (M(1, 0) - M(0, 1)) / s;
  } else if (M(0, 0) > M(1, 1) && M(0, 0) > M(2, 2)) {
    T s = std::sqrt(1 + M(0, 0) - M(1, 1) - M(2, 2)) * 2;  // s = 4x
    q.w = (M(2, 1) - M(1, 2)) / s;
    q.x = s / 4;
    q.y = (M(0, 1) + M(1, 0)) / s;
    q.z = (M(0, 2) + M(2, 0)) / s;
  } else if (M(1, 1) > M(2, 2)) {
    T s = std::sqrt(1 + M(1, 1) - M(0, 0) - M(2, 2)) * 2;  // s = 4y
    q.w = (M(0, 2) - M(2, 0)) / s;
    q.x = (M(0, 1) + M(1, 0)) / s;
    q.y = s / 4;
    q.z = (M(1, 2) + M(2, 1)) / s;
  } else {
    T s = std::sqrt(1 + M(2, 2) - M(0, 0) - M(1, 1)) * 2;  // s = 4z
    q.w = (M(1, 0) - M(0, 1)) / s;
    q.x = (M(0, 2) + M(2, 0)) / s;
    q.y = (M(1, 2) + M(2, 1)) / s;
    q.z = s / 4;
  }
  return q;
}

// Adjoint of mat_to_quat, matching its branch structure.
template <class T>
inline void mat_to_quat_vjp(const Mat3<T>& M, const Quat<T>& q_bar, Mat3<T>& M_bar) {
  T tr = M(0, 0) + M(1, 1) + M(2, 2);
  if (tr > 0) {
    T s = std::sqrt(tr + 1) * 2;
    T x = (M(2, 1) - M(1, 2)) / s;
    T y = (M(0, 2) - M(2, 0)) / s;
    T z = (M(1, 0) - M(0, 1)) / s;
    // ds/dtr = 2 / s; w = s/4.
    T s_bar = q_bar.w / 4 - (q_bar.x * x + q_bar.y * y + q_bar.z * z) / s;
    T tr_bar = s_bar * 2 / s;
    M_bar(0, 0) += tr_bar;
    M_bar(1, 1) += tr_bar;
    M_bar(2, 2) += tr_bar;
    M_bar(2, 1) += q_bar.x / s;
    M_bar(1, 2) -= q_bar.x / s;
    M_bar(0, 2) += q_bar.y / s;
    M_bar(2, 0) -= q_bar.y / s;
    M_bar(1, 0) += q_bar.z / s;
    M_bar(0, 1) -= q_bar.z / s;
    return;
  }
  int i;  // pivot axis
  if (M(0, 0) > M(1, 1) && M(0, 0) > M(2, 2)) i = 0;
  else if (M(1, 1) > M(2, 2)) i = 1;
  else i = 2;
  int j = (i + 1) % 3, k = (i + 2) % 3;
  T s = std::sqrt(1 + M(i, i) - M(j, j) - M(k, k)) * 2;
  // q[i+1] = s/4; q.w = (M(k,j)-M(j,k))/s; q[j+1] = (M(j,i)+M(i,j))/s; q[k+1] = (M(k,i)+M(i,k))/s
  T qw = (M(k, j) - M(j, k)) / s;
  T qj = (M(j, i) + M(i, j)) / s;
  T qk = (M(k, i) + M(i, k)) / s;
  T bw = q_bar.w, bi = q_bar[i + 1], bj = q_bar[j + 1], bk = q_bar[k + 1];
  T s_bar = bi / 4 - (bw * qw + bj * qj + bk * qk) / s;
  T d_bar = s_bar * 2 / s;  // d = 1 + Mii - Mjj - Mkk
  M_bar(i, i) += d_bar;
  M_bar(j, j) -= d_bar;
  M_bar(k, k) -= d_bar;
  M_bar(k, j) += bw / s;
  M_bar(j, k) -= bw / s;
  M_bar(j, i) += bj / s;
  M_bar(i, j) += bj / s;
  M_bar(k, i) += bk / s;
  M_bar(i, k) += bk / s;
}

// Axis-angle (rotation vector) to quaternion with the angle clamped to
// max_angle. The clamp rescales the vector, so direction gradients survive
// in the saturated region.
template <class T>
inline Quat<T> axis_angle_to_quat(const Vec3<T>& v, T max_angle) {
  T theta = norm(v);
  Vec3<T> u = v;
  if (theta > max_angle) u = v * (max_angle / theta);
  T t = norm(u);
  T half = t / 2;
  T s;  // sin(t/2)/t with a series fallback near zero
  if (t < T(1e-4)) {
    s = T(0.5) - t * t / 48;
  } else {
    s = std::sin(half) / t;
  }
  return {std::cos(half), s * u.x, s * u.y, s * u.z};
}

template <class T>
inline void axis_angle_to_quat_vjp(const Vec3<T>& v, T max_angle, const Quat<T>& q_bar,
                                   Vec3<T>& v_bar) {
  T theta = norm(v);
  bool clamped = theta > max_angle;
  Vec3<T> u = clamped ? v * (max_angle / theta) : v;
  T t = norm(u);
  T half = t / 2;
  T s, ds;  // s = sin(t/2)/t and its derivative ds/dt
  if (t < T(1e-4)) {
    s = T(0.5) - t * t / 48;
    ds = -t / 24;
  } else {
    s = std::sin(half) / t;
    ds = (std::cos(half) / 2 - s) / t;
  }
  // q = (cos(t/2), s * u); t = |u|.
  Vec3<T> u_bar{0, 0, 0};
  Vec3<T> qv_bar{q_bar.x, q_bar.y, q_bar.z};
  u_bar += qv_bar * s;
  T t_bar = dot(qv_bar, u) * ds - q_bar.w * std::sin(half) / 2;
  if (t > 0) u_bar += u * (t_bar / t);
  if (!clamped) {
    v_bar += u_bar;
  } else {
    // u = max_angle * v / |v|
    T a = max_angle / theta;
    Vec3<T> vhat = v / theta;
    v_bar += (u_bar - vhat * dot(vhat, u_bar)) * a;
  }
}

// Gram-Schmidt orthonormalization of the columns of A (right-handed result).
template <class T>
inline Mat3<T> orthonormalize(const Mat3<T>& A) {
  Vec3<T> c0 = normalize(A.col(0));
  Vec3<T> c1 = A.col(1) - c0 * dot(c0, A.col(1));
  c1 = normalize(c1);
  Vec3<T> c2 = cross(c0, c1);
  Mat3<T> R;
  R.set_col(0, c0);
  R.set_col(1, c1);
  R.set_col(2, c2);
  return R;
}

template <class T>
inline void orthonormalize_vjp(const Mat3<T>& A, const Mat3<T>& R_bar, Mat3<T>& A_bar) {
  Vec3<T> a0 = A.col(0), a1 = A.col(1);
  Vec3<T> c0 = normalize(a0);
  Vec3<T> p = a1 - c0 * dot(c0, a1);
  Vec3<T> c1 = normalize(p);
  // c2 = cross(c0, c1): <c2_bar, dc0 x c1> = <dc0, c1 x c2_bar> and
  // <c2_bar, c0 x dc1> = <dc1, c2_bar x c0>.
  Vec3<T> c2_bar = R_bar.col(2);
  Vec3<T> c0_bar = R_bar.col(0) + cross(c1, c2_bar);
  Vec3<T> c1_bar = R_bar.col(1) + cross(c2_bar, c0);
  // c1 = normalize(p)
  Vec3<T> p_bar = normalize_vjp(p, c1_bar);
  // p = a1 - c0 (c0 . a1)
  Vec3<T> a1_bar = p_bar - c0 * dot(c0, p_bar);
  Vec3<T> c0_bar2 = p_bar * (-dot(c0, a1)) - a1 * dot(c0, p_bar);
  c0_bar += c0_bar2;
  // c0 = normalize(a0)
  Vec3<T> a0_bar = normalize_vjp(a0, c0_bar);
  for (int r = 0; r < 3; ++r) {
    A_bar(r, 0) += a0_bar[r];
    A_bar(r, 1) += a1_bar[r];
  }
}

// Rigid transform x -> R x + t.
template <class T>
struct Rigid {
  Mat3<T> R = Mat3<T>::identity();
  Vec3<T> t{0, 0, 0};

  static Rigid identity() { return {}; }

  Vec3<T> apply(const Vec3<T>& p) const { return R * p + t; }

  Rigid compose(const Rigid& o) const {  // this ∘ o (apply o first)
    return {R * o.R, R * o.t + t};
  }
  Rigid inverse() const {
    Mat3<T> Rt = R.transposed();
    return {Rt, Rt * (t * T(-1))};
  }
};

// Adjoint of c = a.compose(b).
template <class T>
inline void rigid_compose_vjp(const Rigid<T>& a, const Rigid<T>& b, const Mat3<T>& cR_bar,
                              const Vec3<T>& ct_bar, Mat3<T>& aR_bar, Vec3<T>& at_bar,
                              Mat3<T>& bR_bar, Vec3<T>& bt_bar) {
  // c.R = a.R b.R:  aR_bar += cR_bar b.R^T ; bR_bar += a.R^T cR_bar
  aR_bar += cR_bar * b.R.transposed();
  bR_bar += a.R.transposed() * cR_bar;
  // c.t = a.R b.t + a.t
  aR_bar += outer(ct_bar, b.t);
  at_bar += ct_bar;
  bt_bar += mul_transposed(a.R, ct_bar);
}

template <class T>
inline T sigmoid(T x) {
  if (x >= 0) {
    T e = std::exp(-x);
    return 1 / (1 + e);
  }
  T e = std::exp(x);
  return e / (1 + e);
}

template <class T>
inline T clamp(T v, T lo, T hi) {
  return v < lo ? lo : (v > hi ? hi : v);
}

}  // namespace gsavatar
