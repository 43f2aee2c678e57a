#include "addbasis/ntt.hpp"

#include <algorithm>
#include <bit>

#include "addbasis/error.hpp"

namespace addbasis {

namespace {

__extension__ typedef unsigned __int128 u128;

// Montgomery arithmetic with R = 2^64 for an odd modulus below 2^62.
class Montgomery {
 public:
  explicit Montgomery(std::uint64_t mod) : mod_(mod) {
    std::uint64_t inv = mod;  // Newton iteration for mod^-1 mod 2^64
    for (int i = 0; i < 6; ++i) inv *= 2 - mod * inv;
    neg_inv_ = 0 - inv;
    r2_ = static_cast<std::uint64_t>((static_cast<u128>(1) << 64) % mod);
    r2_ = static_cast<std::uint64_t>(static_cast<u128>(r2_) * r2_ % mod);
  }

  std::uint64_t mod() const { return mod_; }

  std::uint64_t reduce(u128 t) const {
    const std::uint64_t m = static_cast<std::uint64_t>(t) * neg_inv_;
    const std::uint64_t r = static_cast<std::uint64_t>((t + static_cast<u128>(m) * mod_) >> 64);
    return r >= mod_ ? r - mod_ : r;
  }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    return reduce(static_cast<u128>(a) * b);
  }
  std::uint64_t to(std::uint64_t a) const { return mul(a % mod_, r2_); }
  std::uint64_t from(std::uint64_t a) const { return reduce(a); }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    const std::uint64_t s = a + b;
    return s >= mod_ ? s - mod_ : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
    return a >= b ? a - b : a + mod_ - b;
  }
  std::uint64_t pow(std::uint64_t base, std::uint64_t e) const {
    std::uint64_t result = to(1);
    while (e) {
      if (e & 1) result = mul(result, base);
      base = mul(base, base);
      e >>= 1;
    }
    return result;
  }

 private:
  std::uint64_t mod_;
  std::uint64_t neg_inv_;
  std::uint64_t r2_;
};

// Iterative radix-2 transform on Montgomery-form values.
class Transform {
 public:
  Transform(const NttPrime& prime, std::size_t length) : m_(prime.modulus), n_(length) {
    const auto log_n = static_cast<unsigned>(std::countr_zero(length));
    if ((prime.modulus - 1) % length != 0) throw CapacityError("transform length too large for prime");
    const std::uint64_t g = m_.to(prime.generator);
    const std::uint64_t root = m_.pow(g, (prime.modulus - 1) / length);
    const std::uint64_t inv_root = m_.pow(root, length - 1);
    // roots_[len + j] = w_{2 len}^j for each stage half-length len
    roots_.assign(length, 0);
    inv_roots_.assign(length, 0);
    for (unsigned s = 0; s < log_n; ++s) {
      const std::size_t half = std::size_t{1} << s;
      const std::uint64_t w = m_.pow(root, length >> (s + 1));
      const std::uint64_t iw = m_.pow(inv_root, length >> (s + 1));
      std::uint64_t cur = m_.to(1);
      std::uint64_t icur = cur;
      for (std::size_t j = 0; j < half; ++j) {
        roots_[half + j] = cur;
        inv_roots_[half + j] = icur;
        cur = m_.mul(cur, w);
        icur = m_.mul(icur, iw);
      }
    }
    inv_length_ = m_.pow(m_.to(length % prime.modulus), prime.modulus - 2);
  }

  const Montgomery& arith() const { return m_; }

  void forward(std::vector<std::uint64_t>& a) const { run(a, roots_); }

  void inverse(std::vector<std::uint64_t>& a) const {
    run(a, inv_roots_);
    for (auto& v : a) v = m_.mul(v, inv_length_);
  }

 private:
  void run(std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& roots) const {
    for (std::size_t i = 1, j = 0; i < n_; ++i) {
      std::size_t bit = n_ >> 1;
      for (; j & bit; bit >>= 1) j ^= bit;
      j ^= bit;
      if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t half = 1; half < n_; half <<= 1) {
      const std::uint64_t* w = roots.data() + half;
      for (std::size_t start = 0; start < n_; start += 2 * half) {
        std::uint64_t* lo = a.data() + start;
        std::uint64_t* hi = lo + half;
        for (std::size_t j = 0; j < half; ++j) {
          const std::uint64_t t = m_.mul(hi[j], w[j]);
          hi[j] = m_.sub(lo[j], t);
          lo[j] = m_.add(lo[j], t);
        }
      }
    }
  }

  Montgomery m_;
  std::size_t n_;
  std::vector<std::uint64_t> roots_;
  std::vector<std::uint64_t> inv_roots_;
  std::uint64_t inv_length_;
};

std::size_t transform_length(std::size_t keep) {
  // Product of two polynomials with `keep` terms each, needed up to index keep-1.
  return std::bit_ceil(std::max<std::size_t>(2 * keep - 1, 2));
}

// Values are in Montgomery form on input and output.
std::vector<std::uint64_t> product(const Transform& tr, std::size_t length,
                                   std::span<const std::uint64_t> a,
                                   std::span<const std::uint64_t> b, std::size_t keep) {
  const auto& m = tr.arith();
  std::vector<std::uint64_t> fa(length, 0);
  std::copy(a.begin(), a.begin() + std::min(a.size(), keep), fa.begin());
  tr.forward(fa);
  if (a.data() == b.data() && a.size() == b.size()) {
    for (auto& v : fa) v = m.mul(v, v);
  } else {
    std::vector<std::uint64_t> fb(length, 0);
    std::copy(b.begin(), b.begin() + std::min(b.size(), keep), fb.begin());
    tr.forward(fb);
    for (std::size_t i = 0; i < length; ++i) fa[i] = m.mul(fa[i], fb[i]);
  }
  tr.inverse(fa);
  fa.resize(keep);
  return fa;
}

}  // namespace

std::vector<std::uint64_t> multiply_mod(std::span<const std::uint64_t> a,
                                        std::span<const std::uint64_t> b, std::size_t keep,
                                        const NttPrime& prime) {
  if (keep == 0) return {};
  const std::size_t length = transform_length(keep);
  const Transform tr(prime, length);
  const auto& m = tr.arith();
  std::vector<std::uint64_t> ma(a.begin(), a.end());
  std::vector<std::uint64_t> mb(b.begin(), b.end());
  for (auto& v : ma) v = m.to(v);
  for (auto& v : mb) v = m.to(v);
  auto out = product(tr, length, ma, mb, keep);
  for (auto& v : out) v = m.from(v);
  return out;
}

std::vector<std::uint64_t> power_mod(std::span<const std::uint8_t> indicator, unsigned exponent,
                                     std::size_t keep, const NttPrime& prime) {
  if (exponent == 0) throw InputError("power_mod needs a positive exponent");
  if (keep == 0) return {};
  const std::size_t length = transform_length(keep);
  const Transform tr(prime, length);
  const auto& m = tr.arith();
  const std::uint64_t one = m.to(1);

  std::vector<std::uint64_t> base(keep, 0);
  for (std::size_t i = 0; i < std::min(indicator.size(), keep); ++i) base[i] = indicator[i] ? one : 0;

  // Left-to-right binary exponentiation: one squaring per bit, one extra
  // product per set bit after the leading one.
  std::vector<std::uint64_t> acc = base;
  for (int bit = std::bit_width(exponent) - 2; bit >= 0; --bit) {
    acc = product(tr, length, acc, acc, keep);
    if ((exponent >> bit) & 1u) acc = product(tr, length, acc, base, keep);
  }
  for (auto& v : acc) v = m.from(v);
  return acc;
}

std::vector<Count> crt_combine(std::span<const std::vector<std::uint64_t>> residues) {
  if (residues.empty() || residues.size() > kNttPrimes.size()) {
    throw InputError("crt_combine takes between 1 and 3 residue vectors");
  }
  const std::size_t size = residues[0].size();
  for (const auto& r : residues) {
    if (r.size() != size) throw InputError("residue vectors differ in length");
  }
  std::vector<Count> out(size);
  const std::uint64_t p1 = kNttPrimes[0].modulus;
  const std::uint64_t p2 = kNttPrimes[1].modulus;
  const std::uint64_t p3 = kNttPrimes[2].modulus;
  auto mulmod = [](std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % p);
  };
  auto powmod = [&](std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1;
    a %= p;
    while (e) {
      if (e & 1) r = mulmod(r, a, p);
      a = mulmod(a, a, p);
      e >>= 1;
    }
    return r;
  };
  const std::uint64_t inv_p1_mod_p2 = powmod(p1, p2 - 2, p2);
  const std::uint64_t p1p2_mod_p3 = mulmod(p1 % p3, p2 % p3, p3);
  const std::uint64_t inv_p1p2_mod_p3 = powmod(p1p2_mod_p3, p3 - 2, p3);
  const Count p1p2 = static_cast<Count>(p1) * p2;

  for (std::size_t n = 0; n < size; ++n) {
    const std::uint64_t a1 = residues[0][n];
    Count value = a1;
    if (residues.size() >= 2) {
      const std::uint64_t a2 = residues[1][n];
      const std::uint64_t k2 = mulmod((a2 + p2 - a1 % p2) % p2, inv_p1_mod_p2, p2);
      value += static_cast<Count>(p1) * k2;
      if (residues.size() == 3) {
        const std::uint64_t a3 = residues[2][n];
        const auto partial = static_cast<std::uint64_t>(value % p3);
        const std::uint64_t k3 = mulmod((a3 + p3 - partial) % p3, inv_p1p2_mod_p3, p3);
        // Wraps modulo 2^128, which is harmless when the true value fits.
        value += p1p2 * k3;
      }
    }
    out[n] = value;
  }
  return out;
}

}  // namespace addbasis
