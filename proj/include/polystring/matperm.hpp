#pragma once

#include <cstdint>
#include <vector>

#include "polystring/base.hpp"
#include "polystring/group.hpp"
#include "polystring/matrix.hpp"
#include "polystring/perm.hpp"

namespace polystring {

// Faithful permutation action of a block-preserving 2n x 2n matrix group on
// the nonzero row vectors of the two natural n-dimensional summands.  The
// action is by right multiplication v -> v.M, so matrix products map to
// permutation products in matching order.
//
// Point encoding: a nonzero vector (v_0,..,v_{n-1}) with entry codes read
// as digits gives the integer v_0 + v_1 S + ... + v_{n-1} S^{n-1} in base
// S = |F|; subtracting 1 yields its index in the first summand, and points
// of the second summand are offset by S^n - 1.
inline Perm matrix_to_perm(const Mat& M) {
  BlockShape bs = split_blocks(M);
  const Fq& F = M.field();
  std::uint32_t n = M.dim() / 2;
  std::uint64_t S = F.size(), span = 1;
  for (std::uint32_t i = 0; i < n; ++i) {
    span *= S;
    if (span > (1ULL << 31)) throw CapExceeded("permutation degree", span, 1ULL << 31);
  }
  std::uint64_t count = span - 1;
  std::uint32_t degree = static_cast<std::uint32_t>(2 * count);

  std::vector<Fq::Elt> v(n), w(n);
  auto decode = [&](std::uint64_t idx) {
    for (std::uint32_t i = 0; i < n; ++i) {
      v[i] = idx % S;
      idx /= S;
    }
  };
  auto act = [&](const Mat& B) {
    for (std::uint32_t j = 0; j < n; ++j) {
      Fq::Elt s = 0;
      for (std::uint32_t i = 0; i < n; ++i)
        if (v[i] != 0) s = F.add(s, F.mul(v[i], B.at(i, j)));
      w[j] = s;
    }
    std::uint64_t code = 0;
    for (std::uint32_t i = n; i-- > 0;) code = code * S + w[i];
    if (code == 0) throw Singular("matrix does not act invertibly on the summand");
    return code - 1;
  };

  std::vector<std::uint32_t> img(degree);
  for (std::uint64_t pt = 0; pt < count; ++pt) {
    decode(pt + 1);
    std::uint64_t target = act(bs.top);
    // A diagonal block fixes the first summand; an antidiagonal one sends
    // it to the second.
    img[pt] = static_cast<std::uint32_t>(bs.anti ? count + target : target);
  }
  for (std::uint64_t pt = 0; pt < count; ++pt) {
    decode(pt + 1);
    std::uint64_t target = act(bs.bottom);
    img[count + pt] = static_cast<std::uint32_t>(bs.anti ? target : count + target);
  }
  return Perm(std::move(img));
}

inline std::vector<Perm> matrices_to_perms(const std::vector<Mat>& gens) {
  std::vector<Perm> out;
  out.reserve(gens.size());
  for (const Mat& M : gens) {
    Perm p = matrix_to_perm(M);
    if (p.is_identity() && !M.is_identity())
      throw UnfaithfulAction("non-identity matrix acts trivially");
    out.push_back(std::move(p));
  }
  return out;
}

inline PermGroup matgroup_to_permgroup(const std::vector<Mat>& gens,
                                       const BuildOptions& opt = {}) {
  if (gens.empty()) throw BadFormat("no matrix generators");
  std::vector<Perm> ps = matrices_to_perms(gens);
  return PermGroup(ps.front().degree(), std::move(ps), opt);
}

}  // namespace polystring
