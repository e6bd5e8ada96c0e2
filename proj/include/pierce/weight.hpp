#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <vector>

namespace pierce {

// Doubling weights are sums of (possibly huge) powers of two; 64-bit floats
// overflow after ~1000 doublings.  Two interchangeable representations are
// provided:
//
//   FloatDyadic -- double mantissa + 64-bit exponent.  Power-of-two scaling is
//                  exact; sums are correct to 1 ulp.  Default for algorithms,
//                  which only ever compare weights against thresholds with
//                  constant-factor slack.
//   BigDyadic   -- arbitrary-precision mantissa + exponent.  Exact.  Selected
//                  at compile time (template parameter) by the differential
//                  test oracles.

class FloatDyadic {
 public:
  FloatDyadic() : mant_(0.0), exp_(0) {}

  static FloatDyadic zero() { return FloatDyadic(); }
  static FloatDyadic one() { return pow2(0); }
  static FloatDyadic pow2(std::int64_t k) {
    FloatDyadic w;
    w.mant_ = 0.5;
    w.exp_ = k + 1;
    return w;
  }
  static FloatDyadic from_double(double v) {
    assert(v >= 0.0);
    FloatDyadic w;
    w.mant_ = v;
    w.normalize();
    return w;
  }

  bool is_zero() const { return mant_ == 0.0; }

  FloatDyadic& operator+=(const FloatDyadic& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) {
      *this = o;
      return *this;
    }
    if (exp_ >= o.exp_) {
      std::int64_t d = exp_ - o.exp_;
      if (d < 1100) mant_ += std::ldexp(o.mant_, static_cast<int>(-d));
    } else {
      std::int64_t d = o.exp_ - exp_;
      if (d < 1100) {
        mant_ = o.mant_ + std::ldexp(mant_, static_cast<int>(-d));
      } else {
        mant_ = o.mant_;
      }
      exp_ = o.exp_;
    }
    normalize();
    return *this;
  }
  friend FloatDyadic operator+(FloatDyadic a, const FloatDyadic& b) {
    a += b;
    return a;
  }

  void mul_pow2(std::int64_t k) {
    if (!is_zero()) exp_ += k;
  }

  void mul_u64(std::uint64_t v) {
    if (v == 0) {
      *this = zero();
      return;
    }
    mant_ *= static_cast<double>(v);
    normalize();
  }

  friend FloatDyadic operator*(const FloatDyadic& a, const FloatDyadic& b) {
    if (a.is_zero() || b.is_zero()) return zero();
    FloatDyadic w;
    w.mant_ = a.mant_ * b.mant_;
    w.exp_ = a.exp_ + b.exp_;
    w.normalize();
    return w;
  }

  // -1 / 0 / +1
  int cmp(const FloatDyadic& o) const {
    if (is_zero()) return o.is_zero() ? 0 : -1;
    if (o.is_zero()) return 1;
    if (exp_ != o.exp_) return exp_ < o.exp_ ? -1 : 1;
    if (mant_ != o.mant_) return mant_ < o.mant_ ? -1 : 1;
    return 0;
  }
  friend bool operator<(const FloatDyadic& a, const FloatDyadic& b) {
    return a.cmp(b) < 0;
  }
  friend bool operator<=(const FloatDyadic& a, const FloatDyadic& b) {
    return a.cmp(b) <= 0;
  }
  friend bool operator==(const FloatDyadic& a, const FloatDyadic& b) {
    return a.cmp(b) == 0;
  }

  double to_double() const {
    if (is_zero()) return 0.0;
    if (exp_ > 1020) return std::ldexp(mant_, 1020);  // clamp
    if (exp_ < -1020) return 0.0;
    return std::ldexp(mant_, static_cast<int>(exp_));
  }

  double log2() const {
    assert(!is_zero());
    return std::log2(mant_) + static_cast<double>(exp_);
  }

  // a/b clamped into double range; used only for sampling probabilities.
  static double ratio(const FloatDyadic& a, const FloatDyadic& b) {
    if (a.is_zero()) return 0.0;
    assert(!b.is_zero());
    std::int64_t d = a.exp_ - b.exp_;
    if (d < -1060) return 0.0;
    if (d > 1060) return 1e308;
    return std::ldexp(a.mant_ / b.mant_, static_cast<int>(d));
  }

  static bool audit_equal(const FloatDyadic& a, const FloatDyadic& b) {
    if (a.is_zero() || b.is_zero()) return a.cmp(b) == 0;
    if (a.exp_ == b.exp_)
      return std::fabs(a.mant_ - b.mant_) <= 1e-9 * std::fabs(b.mant_);
    // allow a mantissa straddling a power of two
    double r = ratio(a, b);
    return r > 1.0 - 1e-9 && r < 1.0 + 1e-9;
  }

 private:
  void normalize() {
    if (mant_ == 0.0) {
      exp_ = 0;
      return;
    }
    assert(mant_ > 0.0 && std::isfinite(mant_));
    int e = 0;
    mant_ = std::frexp(mant_, &e);  // mant in [0.5, 1)
    exp_ += e;
  }

  double mant_;  // 0, or in [0.5, 1)
  std::int64_t exp_;
};

// Unsigned big integer, little-endian 64-bit limbs, no leading zero limbs.
// Only the handful of operations the exact weight mode needs.
class BigNat {
 public:
  BigNat() = default;
  explicit BigNat(std::uint64_t v) {
    if (v) limbs_.push_back(v);
  }

  bool is_zero() const { return limbs_.empty(); }

  std::int64_t bit_length() const {
    if (limbs_.empty()) return 0;
    return static_cast<std::int64_t>(limbs_.size()) * 64 -
           __builtin_clzll(limbs_.back());
  }

  std::int64_t trailing_zero_bits() const {
    assert(!is_zero());
    std::int64_t t = 0;
    for (std::uint64_t l : limbs_) {
      if (l == 0) {
        t += 64;
      } else {
        return t + __builtin_ctzll(l);
      }
    }
    return t;
  }

  void shl_bits(std::int64_t k) {
    if (is_zero() || k == 0) return;
    std::size_t limb_shift = static_cast<std::size_t>(k / 64);
    int bit_shift = static_cast<int>(k % 64);
    std::size_t old = limbs_.size();
    limbs_.resize(old + limb_shift + 1, 0);
    for (std::size_t i = old; i-- > 0;) {
      std::uint64_t v = limbs_[i];
      limbs_[i] = 0;
      if (bit_shift == 0) {
        limbs_[i + limb_shift] |= v;
      } else {
        limbs_[i + limb_shift + 1] |= v >> (64 - bit_shift);
        limbs_[i + limb_shift] |= v << bit_shift;
      }
    }
    trim();
  }

  void shr_bits(std::int64_t k) {
    if (is_zero() || k == 0) return;
    std::size_t limb_shift = static_cast<std::size_t>(k / 64);
    int bit_shift = static_cast<int>(k % 64);
    if (limb_shift >= limbs_.size()) {
      limbs_.clear();
      return;
    }
    std::size_t n = limbs_.size() - limb_shift;
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t v = limbs_[i + limb_shift] >> bit_shift;
      if (bit_shift && i + limb_shift + 1 < limbs_.size())
        v |= limbs_[i + limb_shift + 1] << (64 - bit_shift);
      limbs_[i] = v;
    }
    limbs_.resize(n);
    trim();
  }

  BigNat& operator+=(const BigNat& o) {
    if (o.limbs_.size() > limbs_.size()) limbs_.resize(o.limbs_.size(), 0);
    std::uint64_t carry = 0;
    std::size_t i = 0;
    for (; i < o.limbs_.size(); ++i) {
      __uint128_t s = static_cast<__uint128_t>(limbs_[i]) + o.limbs_[i] + carry;
      limbs_[i] = static_cast<std::uint64_t>(s);
      carry = static_cast<std::uint64_t>(s >> 64);
    }
    for (; carry && i < limbs_.size(); ++i) {
      __uint128_t s = static_cast<__uint128_t>(limbs_[i]) + carry;
      limbs_[i] = static_cast<std::uint64_t>(s);
      carry = static_cast<std::uint64_t>(s >> 64);
    }
    if (carry) limbs_.push_back(carry);
    return *this;
  }

  void mul_small(std::uint64_t v) {
    if (v == 0 || is_zero()) {
      limbs_.clear();
      return;
    }
    std::uint64_t carry = 0;
    for (auto& l : limbs_) {
      __uint128_t p = static_cast<__uint128_t>(l) * v + carry;
      l = static_cast<std::uint64_t>(p);
      carry = static_cast<std::uint64_t>(p >> 64);
    }
    if (carry) limbs_.push_back(carry);
  }

  friend BigNat operator*(const BigNat& a, const BigNat& b) {
    BigNat r;
    if (a.is_zero() || b.is_zero()) return r;
    r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
    for (std::size_t i = 0; i < a.limbs_.size(); ++i) {
      std::uint64_t carry = 0;
      for (std::size_t j = 0; j < b.limbs_.size(); ++j) {
        __uint128_t p = static_cast<__uint128_t>(a.limbs_[i]) * b.limbs_[j] +
                        r.limbs_[i + j] + carry;
        r.limbs_[i + j] = static_cast<std::uint64_t>(p);
        carry = static_cast<std::uint64_t>(p >> 64);
      }
      r.limbs_[i + b.limbs_.size()] += carry;
    }
    r.trim();
    return r;
  }

  int cmp(const BigNat& o) const {
    if (limbs_.size() != o.limbs_.size())
      return limbs_.size() < o.limbs_.size() ? -1 : 1;
    for (std::size_t i = limbs_.size(); i-- > 0;) {
      if (limbs_[i] != o.limbs_[i]) return limbs_[i] < o.limbs_[i] ? -1 : 1;
    }
    return 0;
  }

  friend bool operator==(const BigNat& a, const BigNat& b) {
    return a.limbs_ == b.limbs_;
  }

  // Most significant ~53 bits as a double in [0.5,1); the value is then
  // m * 2^exp_out with exp_out = bit_length().
  double top_mantissa(std::int64_t* exp_out) const {
    assert(!is_zero());
    double m = 0.0;
    std::size_t taken = 0;
    for (std::size_t i = limbs_.size(); i-- > 0 && taken < 2; ++taken)
      m = m * 0x1.0p64 + static_cast<double>(limbs_[i]);
    int e = 0;
    m = std::frexp(m, &e);
    *exp_out = bit_length();
    return m;
  }

 private:
  void trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
  }
  std::vector<std::uint64_t> limbs_;
};

class BigDyadic {
 public:
  BigDyadic() : exp_(0) {}

  static BigDyadic zero() { return BigDyadic(); }
  static BigDyadic one() { return pow2(0); }
  static BigDyadic pow2(std::int64_t k) {
    BigDyadic w;
    w.mant_ = BigNat(1);
    w.exp_ = k;
    return w;
  }

  bool is_zero() const { return mant_.is_zero(); }

  BigDyadic& operator+=(const BigDyadic& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) {
      *this = o;
      return *this;
    }
    if (exp_ >= o.exp_) {
      mant_.shl_bits(exp_ - o.exp_);
      mant_ += o.mant_;
      exp_ = o.exp_;
    } else {
      BigNat t = o.mant_;
      t.shl_bits(o.exp_ - exp_);
      t += mant_;
      mant_ = t;
    }
    normalize();
    return *this;
  }
  friend BigDyadic operator+(BigDyadic a, const BigDyadic& b) {
    a += b;
    return a;
  }

  void mul_pow2(std::int64_t k) {
    if (!is_zero()) exp_ += k;
  }

  void mul_u64(std::uint64_t v) {
    mant_.mul_small(v);
    if (mant_.is_zero())
      exp_ = 0;
    else
      normalize();
  }

  friend BigDyadic operator*(const BigDyadic& a, const BigDyadic& b) {
    BigDyadic w;
    w.mant_ = a.mant_ * b.mant_;
    w.exp_ = w.mant_.is_zero() ? 0 : a.exp_ + b.exp_;
    w.normalize();
    return w;
  }

  int cmp(const BigDyadic& o) const {
    if (is_zero()) return o.is_zero() ? 0 : -1;
    if (o.is_zero()) return 1;
    std::int64_t ta = exp_ + mant_.bit_length();
    std::int64_t tb = o.exp_ + o.mant_.bit_length();
    if (ta != tb) return ta < tb ? -1 : 1;
    // same top bit position; align and compare exactly
    BigNat a = mant_, b = o.mant_;
    if (exp_ >= o.exp_)
      a.shl_bits(exp_ - o.exp_);
    else
      b.shl_bits(o.exp_ - exp_);
    return a.cmp(b);
  }
  friend bool operator<(const BigDyadic& a, const BigDyadic& b) {
    return a.cmp(b) < 0;
  }
  friend bool operator<=(const BigDyadic& a, const BigDyadic& b) {
    return a.cmp(b) <= 0;
  }
  friend bool operator==(const BigDyadic& a, const BigDyadic& b) {
    return a.exp_ == b.exp_ && a.mant_ == b.mant_;  // both normalized
  }

  double to_double() const {
    if (is_zero()) return 0.0;
    std::int64_t e;
    double m = mant_.top_mantissa(&e);
    std::int64_t total = e + exp_;
    if (total > 1020) return std::ldexp(m, 1020);
    if (total < -1020) return 0.0;
    return std::ldexp(m, static_cast<int>(total));
  }

  double log2() const {
    assert(!is_zero());
    std::int64_t e;
    double m = mant_.top_mantissa(&e);
    return std::log2(m) + static_cast<double>(e + exp_);
  }

  static double ratio(const BigDyadic& a, const BigDyadic& b) {
    if (a.is_zero()) return 0.0;
    assert(!b.is_zero());
    std::int64_t ea, eb;
    double ma = a.mant_.top_mantissa(&ea);
    double mb = b.mant_.top_mantissa(&eb);
    std::int64_t d = (ea + a.exp_) - (eb + b.exp_);
    if (d < -1060) return 0.0;
    if (d > 1060) return 1e308;
    return std::ldexp(ma / mb, static_cast<int>(d));
  }

  static bool audit_equal(const BigDyadic& a, const BigDyadic& b) {
    return a == b;
  }

 private:
  void normalize() {
    if (mant_.is_zero()) {
      exp_ = 0;
      return;
    }
    std::int64_t t = mant_.trailing_zero_bits();
    if (t > 0) {
      mant_.shr_bits(t);
      exp_ += t;
    }
  }

  BigNat mant_;
  std::int64_t exp_;
};

}  // namespace pierce
