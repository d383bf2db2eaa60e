// Dense row-major containers: Image (H x W x C, channels interleaved) for
// render buffers and targets, Tensor3 (C x H x W, planar) for latent codes,
// UV attribute maps and network activations.
#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace gsavatar {

template <class T>
struct Image {
  int h = 0, w = 0, ch = 0;
  std::vector<T> data;

  Image() = default;
  Image(int h_, int w_, int ch_) : h(h_), w(w_), ch(ch_), data(size_t(h_) * w_ * ch_, T(0)) {}

  T& at(int y, int x, int c) { return data[(size_t(y) * w + x) * ch + c]; }
  T at(int y, int x, int c) const { return data[(size_t(y) * w + x) * ch + c]; }

  size_t size() const { return data.size(); }
  bool same_shape(const Image& o) const { return h == o.h && w == o.w && ch == o.ch; }
  void fill(T v) { data.assign(data.size(), v); }
};

template <class T>
struct Tensor3 {
  int c = 0, h = 0, w = 0;
  std::vector<T> data;

  Tensor3() = default;
  Tensor3(int c_, int h_, int w_) : c(c_), h(h_), w(w_), data(size_t(c_) * h_ * w_, T(0)) {}

  T& at(int ci, int y, int x) { return data[(size_t(ci) * h + y) * w + x]; }
  T at(int ci, int y, int x) const { return data[(size_t(ci) * h + y) * w + x]; }

  size_t size() const { return data.size(); }
  bool same_shape(const Tensor3& o) const { return c == o.c && h == o.h && w == o.w; }
  void fill(T v) { data.assign(data.size(), v); }
};

template <class T, class U>
Tensor3<T> cast_tensor(const Tensor3<U>& t) {
  Tensor3<T> r(t.c, t.h, t.w);
  for (size_t i = 0; i < t.data.size(); ++i) r.data[i] = static_cast<T>(t.data[i]);
  return r;
}

template <class T, class U>
Image<T> cast_image(const Image<U>& t) {
  Image<T> r(t.h, t.w, t.ch);
  for (size_t i = 0; i < t.data.size(); ++i) r.data[i] = static_cast<T>(t.data[i]);
  return r;
}

}  // namespace gsavatar
