// Copyright (C) 2026 chipfhe contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "chipfhe/modarith.hpp"
#include "chipfhe/polykernel.hpp"

namespace chipfhe {

/// Parameter shape used to build an RnsBasis for the functional layer.
struct CkksParams {
  u64 n = 4096;
  int l_max = 8;
  int dnum = 3;
  int q_bits = 40;
  int p_bits = 40;
  double sigma = 3.2;
};

CkksParams toy_params();

/// Per-routine operation counts in units of one limb polynomial.
struct OpCounts {
  u64 intt = 0;
  u64 ntt = 0;
  u64 mas = 0;
  u64 bconv = 0;
  u64 aut = 0;

  OpCounts& operator+=(const OpCounts& o);
  bool operator==(const OpCounts&) const = default;
};

/// Counts grouped by phase: modup, keymul, moddown, rescale, mult, add, rotate.
struct Census {
  std::map<std::string, OpCounts> phases;

  OpCounts& operator[](const std::string& phase) { return phases[phase]; }
  OpCounts total() const;
};

std::string census_to_json(const Census& c, const std::string& routine, int level, int dnum, int k);

/// Immutable per-basis state: twiddle tables and CRT constants.
class CkksContext {
 public:
  explicit CkksContext(RnsBasis basis, double sigma = 3.2);

  const RnsBasis& basis() const { return basis_; }
  std::size_t n() const { return basis_.n; }
  int l_max() const { return basis_.l_max; }
  std::size_t p_count() const { return basis_.p_list.size(); }
  double sigma() const { return sigma_; }
  const PrimeModulus& modulus(std::size_t id) const { return basis_.modulus(id); }
  const TwiddleTable& table(std::size_t id) const { return tables_[id]; }
  const NttPlan& shuffle_plan() const { return plan_; }

  /// P^-1 mod q_i and P mod q_i.
  u64 p_inv_mod_q(std::size_t i) const { return p_inv_mod_q_[i]; }
  u64 p_mod_q(std::size_t i) const { return p_mod_q_[i]; }

 private:
  RnsBasis basis_;
  double sigma_;
  std::vector<TwiddleTable> tables_;
  NttPlan plan_;
  std::vector<u64> p_inv_mod_q_, p_mod_q_;
};

/// Limbs q_0..q_l, optionally followed by the special primes p_0..p_{K-1}.
struct RnsPoly {
  std::vector<Poly> limbs;
  int level = 0;

  RnsPoly() = default;
  RnsPoly(const CkksContext& ctx, int level, bool extended, Domain d);

  bool extended() const { return limbs.size() > static_cast<std::size_t>(level) + 1; }
  Domain domain() const { return limbs.empty() ? Domain::coeff : limbs.front().domain; }
  bool operator==(const RnsPoly&) const = default;
};

void to_ntt(const CkksContext& ctx, RnsPoly& p);
void to_coeff(const CkksContext& ctx, RnsPoly& p);

/// Reduces a signed integer polynomial into RNS form.
RnsPoly rns_from_signed(const CkksContext& ctx, const std::vector<std::int64_t>& coeffs, int level,
                        bool extended);

struct Ciphertext {
  RnsPoly c0, c1;
  int level = 0;
  double scale = 1.0;
};

struct ExtCiphertext {
  RnsPoly d0, d1, d2;
  int level = 0;
  double scale = 1.0;
};

struct SecretKey {
  std::vector<std::int64_t> coeffs;  // ternary
  RnsPoly ntt;                       // level L, extended
};

struct KskDigit {
  RnsPoly ksk0;                 // level L, extended, NTT domain
  std::vector<u64> ksk1_seeds;  // one per limb of ksk0
  RnsPoly ksk1;                 // empty unless expanded
};

struct KeySwitchKey {
  int dnum = 0;
  int k = 0;
  int l_max = 0;
  std::vector<KskDigit> digits;

  bool expanded() const { return !digits.empty() && !digits.front().ksk1.limbs.empty(); }
};

/// ksk1 limb `key_limb` of `digit`, from storage or regenerated from its seed.
Poly ksk1_limb(const CkksContext& ctx, const KskDigit& digit, std::size_t key_limb);
void expand_key(const CkksContext& ctx, KeySwitchKey& key);
void drop_expansion(KeySwitchKey& key);

/// Storage footprint in bytes: 8 per coefficient, 8 per seed.
u64 key_bytes(const KeySwitchKey& key);

struct KeySet {
  KeySwitchKey relin;
  std::map<std::int64_t, KeySwitchKey> rotation;
};

/// Draws a fresh key from `seed` that switches s_prime (NTT, level L, extended) to s.
KeySwitchKey gen_switch_key(const CkksContext& ctx, const SecretKey& sk, const RnsPoly& s_prime, u64 seed,
                            bool seeded = true);

SecretKey gen_secret(const CkksContext& ctx, u64 seed);

/// Secret, relinearization key for s^2 and rotation keys for `rotations`.
std::pair<SecretKey, KeySet> keygen(const CkksContext& ctx, u64 seed, const std::vector<std::int64_t>& rotations = {},
                                    bool seeded = true);

/// Canonical-embedding encode of up to N/2 slots; result is NTT domain at `level`.
RnsPoly encode(const CkksContext& ctx, const std::vector<std::complex<double>>& slots, double scale, int level);
std::vector<std::complex<double>> decode(const CkksContext& ctx, const RnsPoly& plain, double scale);

/// Centered CRT lift of every coefficient, as doubles.
std::vector<double> lift_centered(const CkksContext& ctx, const RnsPoly& p);

Ciphertext encrypt(const CkksContext& ctx, const SecretKey& sk, const RnsPoly& plain, double scale, u64 seed);
RnsPoly decrypt(const CkksContext& ctx, const SecretKey& sk, const Ciphertext& c);
/// d0 + d1*s + d2*s^2.
RnsPoly decrypt_ext(const CkksContext& ctx, const SecretKey& sk, const ExtCiphertext& d);

Ciphertext add(const CkksContext& ctx, const Ciphertext& a, const Ciphertext& b, Census* census = nullptr);
ExtCiphertext mult(const CkksContext& ctx, const Ciphertext& a, const Ciphertext& b, Census* census = nullptr);
Ciphertext rotate_perm(const CkksContext& ctx, const Ciphertext& c, std::int64_t rot, Census* census = nullptr);

Ciphertext keyswitch_full_dnum(const CkksContext& ctx, const ExtCiphertext& d, const KeySwitchKey& ksk,
                               Census* census = nullptr);
Ciphertext keyswitch_generic(const CkksContext& ctx, const ExtCiphertext& d, const KeySwitchKey& ksk, int dnum,
                             Census* census = nullptr);

/// Fast base conversion of the limbs of y (NTT domain) into `targets`
/// (global modulus ids), returned in NTT domain.
RnsPoly bconv_routine(const CkksContext& ctx, const RnsPoly& y, const std::vector<std::uint32_t>& targets,
                      Census* census = nullptr);

/// Drops the special primes: floor-style (x - [x]_P) / P per coefficient.
RnsPoly moddown(const CkksContext& ctx, const RnsPoly& d, Census* census = nullptr);

Ciphertext rescale(const CkksContext& ctx, const Ciphertext& c, Census* census = nullptr);

/// Keyswitch with the algorithm matching the key's dnum.
Ciphertext relinearize(const CkksContext& ctx, const ExtCiphertext& d, const KeySet& keys, Census* census = nullptr);
Ciphertext rotate(const CkksContext& ctx, const Ciphertext& c, std::int64_t rot, const KeySet& keys,
                  Census* census = nullptr);

/// Header: magic, u64 N, u32 level, u32 dnum, f64 scale; then limb arrays.
void write_ciphertext(std::ostream& os, const Ciphertext& c, u64 n);
Ciphertext read_ciphertext(std::istream& is);
void write_key(std::ostream& os, const KeySwitchKey& key, u64 n);
KeySwitchKey read_key(std::istream& is);

}  // namespace chipfhe
