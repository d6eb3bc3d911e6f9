#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qx/pyramid.hpp"
#include "qx/rational.hpp"

namespace qx {

/// Galois field of order 2, 3, 4, 5, 7, 8 or 9. Elements are encoded as
/// 0..order-1; prime powers use polynomial arithmetic modulo a fixed
/// irreducible, with digits in base p as coefficients.
class GaloisField {
public:
    explicit GaloisField(int order);

    int order() const { return q_; }
    int characteristic() const { return p_; }

    int add(int a, int b) const { return add_[idx(a, b)]; }
    int sub(int a, int b) const { return add(a, neg(b)); }
    int mul(int a, int b) const { return mul_[idx(a, b)]; }
    int neg(int a) const { return neg_[check(a)]; }
    int inv(int a) const;

private:
    size_t idx(int a, int b) const { return static_cast<size_t>(check(a)) * q_ + check(b); }
    int check(int a) const;

    int q_, p_, e_;
    std::vector<int> add_, mul_, neg_, inv_;
};

using FVector = std::vector<int>;

/// Subspace of F^n, canonicalized to a reduced row-echelon basis at
/// construction so that equality of subspaces is representation equality.
class Subspace {
public:
    Subspace(const GaloisField* F, int ambient, std::vector<FVector> generators);
    static Subspace zero(const GaloisField* F, int n) { return Subspace(F, n, {}); }
    static Subspace full(const GaloisField* F, int n);

    int dim() const { return static_cast<int>(rows_.size()); }
    int ambient() const { return n_; }
    const std::vector<FVector>& basis() const { return rows_; }
    const GaloisField* field() const { return F_; }

    bool contains_vector(FVector w) const;
    bool contains(const Subspace& other) const;

    /// Intersection with the span of the first m coordinate vectors,
    /// re-expressed with ambient dimension m.
    Subspace meet_first(int m) const;

    bool operator==(const Subspace& o) const { return n_ == o.n_ && rows_ == o.rows_; }
    bool operator<(const Subspace& o) const {
        return n_ != o.n_ ? n_ < o.n_ : rows_ < o.rows_;
    }

private:
    const GaloisField* F_;
    int n_;
    std::vector<FVector> rows_;
};

/// All subspaces of F^n, every dimension, in canonical form.
std::vector<Subspace> enumerate_subspaces(const GaloisField& F, int n);

/// Decreasing d-flag: V_n = X(0) >= X(1) >= ... >= X(d) = {0}, inclusions
/// not necessarily strict.
class FlagChain {
public:
    explicit FlagChain(std::vector<Subspace> spaces);

    int d() const { return static_cast<int>(spaces_.size()) - 1; }
    int ambient() const { return spaces_.front().ambient(); }
    const Subspace& space(int i) const { return spaces_[static_cast<size_t>(i)]; }

    /// Type lambda with lambda_i = dim X(i-1) - dim X(i); |lambda| = n.
    Vertex type() const;

    /// Componentwise intersection with V_m.
    FlagChain project(int m) const;

    bool operator==(const FlagChain& o) const { return spaces_ == o.spaces_; }
    bool operator<(const FlagChain& o) const { return spaces_ < o.spaces_; }

private:
    std::vector<Subspace> spaces_;
};

/// All decreasing d-flags in F^n. Budget: order^n <= 4096.
std::vector<FlagChain> enumerate_flags(const GaloisField& F, int n, int d);

/// Canonical coordinate flag of a given type (X(i) spanned by the last
/// dim-many basis vectors).
FlagChain coordinate_flag(const GaloisField& F, const Vertex& type);

/// Number of flags of type lambda + e_a in V_{n+1} projecting onto a fixed
/// flag of type lambda in V_n: qhat^(lambda_1 + ... + lambda_{a-1}).
std::int64_t extension_count(const Vertex& lambda, int a, std::int64_t qhat);

/// The same count by explicit projection enumeration over the field.
std::int64_t extension_count_bruteforce(const GaloisField& F, const Vertex& lambda, int a);

/// Exact identity extension_count = edge_weight * q^(lambda_a - n) at
/// q = 1/qhat. (Reduces to weight' = weight * q^{-n} when lambda_a = 0.)
bool extension_edge_relation_holds(const Vertex& lambda, int a, const Rational& q);

/// The flag-side recursion psi(la) = sum_a extension_count(la, a) psi(la+e_a)
/// with closed-form counts at qhat = 1/q; checks psi(origin) = 1 too.
GibbsReport invariant_recursion_check(const LevelFunction& psi, const Rational& q);

/// Transform between Gibbs functions phi of the pyramid and flag-invariant
/// mass functions psi: phi(la) = q^(sum_b C(la_b,2) - C(n,2)) psi(la).
/// Each direction verifies its input recursion first (throws on failure).
LevelFunction gibbs_to_invariant(const LevelFunction& phi, const Rational& q);
LevelFunction invariant_to_gibbs(const LevelFunction& psi, const Rational& q);

struct InvariantReport {
    bool ok = true;
    Vertex witness;
    std::string detail;
};

/// Validates psi as a consistent invariant mass function using brute-force
/// projection counts (not the closed form), plus per-level total mass
/// sum_lambda #flags(lambda) psi(lambda) = 1.
InvariantReport invariant_measure_check(const LevelFunction& psi, int n_max,
                                        const GaloisField& F);

}  // namespace qx
