// Copyright 2026 The Edgelight Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EDGELIGHT_VEC3_H_
#define EDGELIGHT_VEC3_H_

#include <cmath>

namespace edgelight {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }

  friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
  friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
  friend constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
  friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr double Dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

constexpr Vec3 Cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double Norm(const Vec3& v) { return std::sqrt(Dot(v, v)); }

inline Vec3 Normalized(const Vec3& v) { return v * (1.0 / Norm(v)); }

// Unit quaternion, (w, x, y, z) order.
struct Quaternion {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  static Quaternion FromAxisAngle(const Vec3& axis, double radians) {
    const Vec3 n = Normalized(axis);
    const double s = std::sin(radians / 2.0);
    return {std::cos(radians / 2.0), n.x * s, n.y * s, n.z * s};
  }

  double Norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

  Quaternion Conjugate() const { return {w, -x, -y, -z}; }

  Vec3 Rotate(const Vec3& v) const {
    // v' = v + 2w(q x v) + 2 q x (q x v)
    const Vec3 q{x, y, z};
    const Vec3 t = 2.0 * Cross(q, v);
    return v + w * t + Cross(q, t);
  }

  friend constexpr bool operator==(const Quaternion&, const Quaternion&) = default;
};

inline Quaternion operator*(const Quaternion& a, const Quaternion& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

}  // namespace edgelight

#endif  // EDGELIGHT_VEC3_H_
