#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qx/inversion_free.hpp"
#include "qx/qkernel.hpp"
#include "qx/rational.hpp"
#include "qx/words.hpp"

namespace qx {

/// A vertex of the d-dimensional weighted lattice: lambda in Z_+^d.
using Vertex = std::vector<int>;

std::int64_t degree(const Vertex& la);

/// All vertices of level n in Z_+^d (compositions of n into d parts).
std::vector<Vertex> vertices_at_level(int d, int n);

/// Weight of the edge lambda -> lambda + e_a: q^(lambda_{a+1}+...+lambda_d).
Rational edge_weight(const Vertex& la, int a, const Rational& q);

/// Partition function dim(lambda): total weight of monotone lattice paths
/// from the origin, equal to the Gaussian multinomial (closed form).
Rational dim_vertex(const Vertex& la, const Rational& q);

/// Same quantity evaluated from the edge weights alone (path recursion,
/// memoized); the independent oracle for dim_vertex.
Rational dim_by_paths(const Vertex& la, const Rational& q);

/// Weighted path count from mu to lambda: q^N(mu,lambda) dim(lambda - mu),
/// zero when lambda - mu leaves Z_+^d.
Rational dim_pair(const Vertex& mu, const Vertex& la, const Rational& q);

/// Martin kernel dim(mu,lambda)/dim(lambda) in closed Pochhammer form.
Rational martin_kernel(const Vertex& mu, const Vertex& la, const Rational& q);

/// The same kernel as a direct quotient (second route for exact checks).
Rational martin_kernel_ratio(const Vertex& mu, const Vertex& la, const Rational& q);

/// Limit of the Martin kernel along lambda-sequences whose partial sums
/// converge to the height function h on N_d (h(0) = 0, and an increment
/// between two infinite values counts as zero).
Rational boundary_kernel(const Vertex& mu, const HeightFunction& h, const Rational& q);

struct KernelRow {
    std::int64_t level;
    double kernel;
    double limit;
    double abs_err;
};

/// Evaluates |martin_kernel(mu, lambda_n) - boundary value| along a vertex
/// sequence indexed by level.
std::vector<KernelRow> kernel_convergence_table(
    const Vertex& mu, const HeightFunction& h,
    const std::function<Vertex(std::int64_t)>& lambda_at,
    const std::vector<std::int64_t>& levels, const QParam& q);

/// Word w_1..w_n over {1..d} as a monotone lattice path from the origin;
/// verifies that the path weight equals q^inv(w) exactly.
std::vector<Vertex> word_to_path(const Word& w, int d, const Rational& q);

/// A nonnegative function on the vertices of levels 0..max_level.
class LevelFunction {
public:
    LevelFunction(int d, int max_level) : d_(d), max_(max_level) {}

    int dims() const { return d_; }
    int max_level() const { return max_; }

    void set(const Vertex& la, Rational value);
    const Rational& at(const Vertex& la) const;
    bool has(const Vertex& la) const { return values_.count(la) != 0; }
    const std::map<Vertex, Rational>& values() const { return values_; }

private:
    int d_;
    int max_;
    std::map<Vertex, Rational> values_;
};

struct GibbsReport {
    bool ok = true;
    Vertex witness;
    std::string detail;
};

/// Backward recursion phi(la) = sum_a weight(la, la+e_a) phi(la+e_a) at all
/// levels below the top, plus phi(origin) = 1 and nonnegativity.
GibbsReport gibbs_recursion_check(const LevelFunction& phi, const Rational& q);

/// gibbs_recursion_check plus the level normalization
/// sum_{|la|=n} dim(la) phi(la) = 1 for every stored level.
GibbsReport gibbs_check(const LevelFunction& phi, const Rational& q);

/// phi of the q-shuffle measure of v (support inside {1..d}):
/// phi(la) = P(prefix = the sorted word of la), the common value of
/// P(u)/q^inv(u) over the orbit.
LevelFunction harmonic_from_word(const InversionFreeWord& v, int d, int max_level,
                                 const QParam& q);

/// phi built from a boundary point: phi(la) = boundary_kernel(la, h).
LevelFunction harmonic_from_boundary(const HeightFunction& h, int d, int max_level,
                                     const Rational& q);

}  // namespace qx
