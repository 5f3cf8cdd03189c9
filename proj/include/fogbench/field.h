#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace fogbench {

/// Row-major grid of doubles. The physical interpretation (depth in meters,
/// transmission, disparity, visibility) is set by the producing operation.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(int height, int width, double fill = 0.0) : h_(height), w_(width) {
    if (height < 1 || width < 1)
      throw std::invalid_argument("ScalarField: dimensions must be >= 1");
    v_.assign(static_cast<std::size_t>(height) * width, fill);
  }

  int height() const { return h_; }
  int width() const { return w_; }
  std::size_t size() const { return v_.size(); }

  double& at(int r, int c) { return v_[static_cast<std::size_t>(r) * w_ + c]; }
  double at(int r, int c) const { return v_[static_cast<std::size_t>(r) * w_ + c]; }
  double& operator[](std::size_t i) { return v_[i]; }
  double operator[](std::size_t i) const { return v_[i]; }

  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }

  bool same_shape(const ScalarField& o) const { return h_ == o.h_ && w_ == o.w_; }

 private:
  int h_ = 0;
  int w_ = 0;
  std::vector<double> v_;
};

/// Planar RGB image, each channel a row-major grid of doubles in [0,1].
class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(int height, int width, double fill = 0.0) : h_(height), w_(width) {
    if (height < 1 || width < 1)
      throw std::invalid_argument("RgbImage: dimensions must be >= 1");
    v_.assign(3 * static_cast<std::size_t>(height) * width, fill);
  }

  int height() const { return h_; }
  int width() const { return w_; }
  std::size_t pixels() const { return static_cast<std::size_t>(h_) * w_; }

  double* plane(int c) { return v_.data() + static_cast<std::size_t>(c) * pixels(); }
  const double* plane(int c) const { return v_.data() + static_cast<std::size_t>(c) * pixels(); }

  double& at(int r, int c, int ch) { return plane(ch)[static_cast<std::size_t>(r) * w_ + c]; }
  double at(int r, int c, int ch) const { return plane(ch)[static_cast<std::size_t>(r) * w_ + c]; }

  bool same_shape(const RgbImage& o) const { return h_ == o.h_ && w_ == o.w_; }
  bool same_shape(const ScalarField& o) const { return h_ == o.height() && w_ == o.width(); }

 private:
  int h_ = 0;
  int w_ = 0;
  std::vector<double> v_;
};

/// Per-pixel validity flags (1 = valid). Paired with derived fields instead of
/// encoding invalid pixels as sentinel values.
class Mask {
 public:
  Mask() = default;
  Mask(int height, int width, std::uint8_t fill = 1) : h_(height), w_(width) {
    if (height < 1 || width < 1)
      throw std::invalid_argument("Mask: dimensions must be >= 1");
    m_.assign(static_cast<std::size_t>(height) * width, fill);
  }

  int height() const { return h_; }
  int width() const { return w_; }
  std::size_t size() const { return m_.size(); }

  std::uint8_t& operator[](std::size_t i) { return m_[i]; }
  std::uint8_t operator[](std::size_t i) const { return m_[i]; }
  std::uint8_t& at(int r, int c) { return m_[static_cast<std::size_t>(r) * w_ + c]; }
  std::uint8_t at(int r, int c) const { return m_[static_cast<std::size_t>(r) * w_ + c]; }

  std::uint8_t* data() { return m_.data(); }
  const std::uint8_t* data() const { return m_.data(); }

  std::size_t count() const {
    std::size_t n = 0;
    for (auto b : m_) n += b ? 1 : 0;
    return n;
  }

 private:
  int h_ = 0;
  int w_ = 0;
  std::vector<std::uint8_t> m_;
};

struct MaskedField {
  ScalarField values;
  Mask valid;
};

struct MaskedImage {
  RgbImage image;
  Mask valid;
};

/// Spatially constant airlight color, channels in [0,1].
struct Airlight {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;

  Airlight() = default;
  Airlight(double r_, double g_, double b_) : r(r_), g(g_), b(b_) {
    for (double c : {r, g, b})
      if (!(c >= 0.0 && c <= 1.0))
        throw std::domain_error("Airlight: channels must be in [0,1]");
  }

  double channel(int c) const { return c == 0 ? r : (c == 1 ? g : b); }
};

/// CIE contrast threshold for recognizability, strictly inside (0,1).
struct Epsilon {
  double value = 0.05;

  Epsilon() = default;
  explicit Epsilon(double v) : value(v) {
    if (!(v > 0.0 && v < 1.0))
      throw std::domain_error("Epsilon: value must be in (0,1)");
  }
};

}  // namespace fogbench
