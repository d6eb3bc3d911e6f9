#include "qx/flags.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace qx {

namespace {

struct FieldSpec {
    int p;
    int e;
    std::vector<int> reduction;  // coefficients of x^e in terms of 1, x, ..., x^{e-1}
};

FieldSpec field_spec(int order) {
    switch (order) {
        case 2: return {2, 1, {}};
        case 3: return {3, 1, {}};
        case 5: return {5, 1, {}};
        case 7: return {7, 1, {}};
        case 4: return {2, 2, {1, 1}};     // x^2 = x + 1
        case 8: return {2, 3, {1, 1, 0}};  // x^3 = x + 1
        case 9: return {3, 2, {2, 0}};     // x^2 = -1 = 2
        default:
            throw std::invalid_argument("GaloisField: supported orders are 2,3,4,5,7,8,9");
    }
}

std::vector<int> digits(int x, int p, int e) {
    std::vector<int> out(static_cast<size_t>(e));
    for (int i = 0; i < e; ++i) {
        out[static_cast<size_t>(i)] = x % p;
        x /= p;
    }
    return out;
}

int undigits(const std::vector<int>& d, int p) {
    int x = 0;
    for (size_t i = d.size(); i-- > 0;) x = x * p + d[i];
    return x;
}

}  // namespace

GaloisField::GaloisField(int order) : q_(order) {
    FieldSpec spec = field_spec(order);
    p_ = spec.p;
    e_ = spec.e;
    add_.assign(static_cast<size_t>(q_) * q_, 0);
    mul_.assign(static_cast<size_t>(q_) * q_, 0);
    neg_.assign(static_cast<size_t>(q_), 0);
    inv_.assign(static_cast<size_t>(q_), 0);

    for (int a = 0; a < q_; ++a) {
        auto da = digits(a, p_, e_);
        std::vector<int> nd(da.size());
        for (size_t i = 0; i < da.size(); ++i) nd[i] = (p_ - da[i]) % p_;
        neg_[static_cast<size_t>(a)] = undigits(nd, p_);
        for (int b = 0; b < q_; ++b) {
            auto db = digits(b, p_, e_);
            std::vector<int> s(da.size());
            for (size_t i = 0; i < da.size(); ++i) s[i] = (da[i] + db[i]) % p_;
            add_[static_cast<size_t>(a) * q_ + b] = undigits(s, p_);

            // Polynomial product, then reduce x^e via the fixed relation.
            std::vector<int> prod(static_cast<size_t>(2 * e_ - 1), 0);
            for (int i = 0; i < e_; ++i)
                for (int j = 0; j < e_; ++j)
                    prod[static_cast<size_t>(i + j)] =
                        (prod[static_cast<size_t>(i + j)] + da[static_cast<size_t>(i)] * db[static_cast<size_t>(j)]) % p_;
            for (int deg = 2 * e_ - 2; deg >= e_; --deg) {
                int c = prod[static_cast<size_t>(deg)];
                if (c == 0) continue;
                prod[static_cast<size_t>(deg)] = 0;
                for (int t = 0; t < e_; ++t) {
                    prod[static_cast<size_t>(deg - e_ + t)] =
                        (prod[static_cast<size_t>(deg - e_ + t)] + c * spec.reduction[static_cast<size_t>(t)]) % p_;
                }
            }
            prod.resize(static_cast<size_t>(e_));
            mul_[static_cast<size_t>(a) * q_ + b] = undigits(prod, p_);
        }
    }
    for (int a = 1; a < q_; ++a) {
        for (int b = 1; b < q_; ++b) {
            if (mul_[static_cast<size_t>(a) * q_ + b] == 1) {
                inv_[static_cast<size_t>(a)] = b;
                break;
            }
        }
        if (inv_[static_cast<size_t>(a)] == 0) {
            throw std::logic_error("GaloisField: element without inverse (bad reduction)");
        }
    }
}

int GaloisField::check(int a) const {
    if (a < 0 || a >= q_) throw std::invalid_argument("GaloisField: element out of range");
    return a;
}

int GaloisField::inv(int a) const {
    if (check(a) == 0) throw std::domain_error("GaloisField: inverse of zero");
    return inv_[static_cast<size_t>(a)];
}

Subspace::Subspace(const GaloisField* F, int ambient, std::vector<FVector> generators)
    : F_(F), n_(ambient), rows_(std::move(generators)) {
    for (const auto& r : rows_) {
        if (static_cast<int>(r.size()) != n_) {
            throw std::invalid_argument("Subspace: generator of wrong length");
        }
    }
    // Gauss-Jordan to reduced row echelon form.
    size_t rank = 0;
    for (int col = 0; col < n_ && rank < rows_.size(); ++col) {
        size_t pivot = rank;
        while (pivot < rows_.size() && rows_[pivot][static_cast<size_t>(col)] == 0) ++pivot;
        if (pivot == rows_.size()) continue;
        std::swap(rows_[rank], rows_[pivot]);
        int lead = rows_[rank][static_cast<size_t>(col)];
        int s = F_->inv(lead);
        for (auto& c : rows_[rank]) c = F_->mul(c, s);
        for (size_t r = 0; r < rows_.size(); ++r) {
            if (r == rank) continue;
            int c = rows_[r][static_cast<size_t>(col)];
            if (c == 0) continue;
            for (int t = 0; t < n_; ++t) {
                rows_[r][static_cast<size_t>(t)] = F_->sub(
                    rows_[r][static_cast<size_t>(t)],
                    F_->mul(c, rows_[rank][static_cast<size_t>(t)]));
            }
        }
        ++rank;
    }
    rows_.resize(rank);
    std::sort(rows_.begin(), rows_.end(), std::greater<>());
}

Subspace Subspace::full(const GaloisField* F, int n) {
    std::vector<FVector> rows;
    for (int i = 0; i < n; ++i) {
        FVector r(static_cast<size_t>(n), 0);
        r[static_cast<size_t>(i)] = 1;
        rows.push_back(std::move(r));
    }
    return Subspace(F, n, std::move(rows));
}

bool Subspace::contains_vector(FVector w) const {
    if (static_cast<int>(w.size()) != n_) {
        throw std::invalid_argument("Subspace: vector of wrong length");
    }
    for (const auto& row : rows_) {
        int col = 0;
        while (col < n_ && row[static_cast<size_t>(col)] == 0) ++col;
        int c = w[static_cast<size_t>(col)];
        if (c == 0) continue;
        for (int t = 0; t < n_; ++t) {
            w[static_cast<size_t>(t)] = F_->sub(w[static_cast<size_t>(t)],
                                                F_->mul(c, row[static_cast<size_t>(t)]));
        }
    }
    return std::all_of(w.begin(), w.end(), [](int c) { return c == 0; });
}

bool Subspace::contains(const Subspace& other) const {
    if (other.n_ != n_) throw std::invalid_argument("Subspace: ambient mismatch");
    for (const auto& row : other.rows_) {
        if (!contains_vector(row)) return false;
    }
    return true;
}

Subspace Subspace::meet_first(int m) const {
    if (m > n_) throw std::invalid_argument("Subspace: meet_first beyond ambient");
    std::vector<FVector> rows = rows_;
    for (int dim = n_; dim > m; --dim) {
        // Intersect with {last coordinate zero}, then drop that coordinate.
        size_t piv = rows.size();
        for (size_t r = 0; r < rows.size(); ++r) {
            if (rows[r][static_cast<size_t>(dim) - 1] != 0) {
                piv = r;
                break;
            }
        }
        if (piv != rows.size()) {
            int lead = rows[piv][static_cast<size_t>(dim) - 1];
            for (size_t r = 0; r < rows.size(); ++r) {
                if (r == piv) continue;
                int c = rows[r][static_cast<size_t>(dim) - 1];
                if (c == 0) continue;
                int s = F_->mul(c, F_->inv(lead));
                for (int t = 0; t < dim; ++t) {
                    rows[r][static_cast<size_t>(t)] = F_->sub(
                        rows[r][static_cast<size_t>(t)],
                        F_->mul(s, rows[piv][static_cast<size_t>(t)]));
                }
            }
            rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(piv));
        }
        for (auto& r : rows) r.pop_back();
    }
    return Subspace(F_, m, std::move(rows));
}

std::vector<Subspace> enumerate_subspaces(const GaloisField& F, int n) {
    std::vector<Subspace> out;
    out.push_back(Subspace::zero(&F, n));
    for (int k = 1; k <= n; ++k) {
        // All reduced echelon bases: choose pivot columns, then free entries.
        std::vector<int> pivots(static_cast<size_t>(k));
        std::function<void(int, int)> choose = [&](int idx, int from) {
            if (idx == k) {
                // Free positions: row i, column j with j > pivots[i], j not a pivot.
                std::vector<std::pair<int, int>> free_pos;
                for (int i = 0; i < k; ++i) {
                    for (int j = pivots[static_cast<size_t>(i)] + 1; j < n; ++j) {
                        if (std::find(pivots.begin(), pivots.end(), j) == pivots.end()) {
                            free_pos.emplace_back(i, j);
                        }
                    }
                }
                std::vector<FVector> rows(static_cast<size_t>(k), FVector(static_cast<size_t>(n), 0));
                for (int i = 0; i < k; ++i) rows[static_cast<size_t>(i)][static_cast<size_t>(pivots[static_cast<size_t>(i)])] = 1;
                std::vector<int> assign(free_pos.size(), 0);
                for (;;) {
                    for (size_t t = 0; t < free_pos.size(); ++t) {
                        rows[static_cast<size_t>(free_pos[t].first)][static_cast<size_t>(free_pos[t].second)] = assign[t];
                    }
                    out.emplace_back(&F, n, rows);
                    size_t t = 0;
                    while (t < assign.size() && assign[t] == F.order() - 1) assign[t++] = 0;
                    if (t == assign.size()) break;
                    ++assign[t];
                }
                return;
            }
            for (int j = from; j < n; ++j) {
                pivots[static_cast<size_t>(idx)] = j;
                choose(idx + 1, j + 1);
            }
        };
        choose(0, 0);
    }
    std::sort(out.begin(), out.end());
    return out;
}

FlagChain::FlagChain(std::vector<Subspace> spaces) : spaces_(std::move(spaces)) {
    if (spaces_.size() < 2) throw std::invalid_argument("FlagChain: need X(0)..X(d)");
    int n = spaces_.front().ambient();
    if (spaces_.front().dim() != n) throw std::invalid_argument("FlagChain: X(0) must be V_n");
    if (spaces_.back().dim() != 0) throw std::invalid_argument("FlagChain: X(d) must be zero");
    for (size_t i = 0; i + 1 < spaces_.size(); ++i) {
        if (!spaces_[i].contains(spaces_[i + 1])) {
            throw std::invalid_argument("FlagChain: spaces must decrease");
        }
    }
}

Vertex FlagChain::type() const {
    Vertex la;
    for (int i = 1; i <= d(); ++i) {
        la.push_back(space(i - 1).dim() - space(i).dim());
    }
    return la;
}

FlagChain FlagChain::project(int m) const {
    std::vector<Subspace> spaces;
    spaces.reserve(spaces_.size());
    for (const auto& s : spaces_) spaces.push_back(s.meet_first(m));
    return FlagChain(std::move(spaces));
}

std::vector<FlagChain> enumerate_flags(const GaloisField& F, int n, int d) {
    std::int64_t budget = 1;
    for (int i = 0; i < n; ++i) {
        budget *= F.order();
        if (budget > 4096) {
            throw std::invalid_argument("enumerate_flags: enumeration budget exceeded (order^n > 4096)");
        }
    }
    if (d < 1) throw std::invalid_argument("enumerate_flags: d must be >= 1");

    auto subspaces = enumerate_subspaces(F, n);
    std::vector<FlagChain> out;
    std::vector<Subspace> chain{Subspace::full(&F, n)};
    std::function<void(int)> extend = [&](int i) {
        if (i == d) {
            chain.push_back(Subspace::zero(&F, n));
            out.emplace_back(chain);
            chain.pop_back();
            return;
        }
        for (const auto& s : subspaces) {
            if (chain.back().contains(s)) {
                chain.push_back(s);
                extend(i + 1);
                chain.pop_back();
            }
        }
    };
    extend(1);
    std::sort(out.begin(), out.end());
    return out;
}

FlagChain coordinate_flag(const GaloisField& F, const Vertex& type) {
    int n = static_cast<int>(degree(type));
    std::vector<Subspace> spaces;
    int drop = 0;
    for (int i = 0; i <= static_cast<int>(type.size()); ++i) {
        if (i > 0) drop += type[static_cast<size_t>(i) - 1];
        std::vector<FVector> rows;
        for (int t = drop; t < n; ++t) {
            FVector r(static_cast<size_t>(n), 0);
            r[static_cast<size_t>(t)] = 1;
            rows.push_back(std::move(r));
        }
        spaces.emplace_back(&F, n, std::move(rows));
    }
    return FlagChain(std::move(spaces));
}

std::int64_t extension_count(const Vertex& lambda, int a, std::int64_t qhat) {
    if (a < 1 || a > static_cast<int>(lambda.size())) {
        throw std::invalid_argument("extension_count: direction out of range");
    }
    std::int64_t expo = 0;
    for (int b = 1; b < a; ++b) expo += lambda[static_cast<size_t>(b) - 1];
    std::int64_t out = 1;
    for (std::int64_t i = 0; i < expo; ++i) out *= qhat;
    return out;
}

std::int64_t extension_count_bruteforce(const GaloisField& F, const Vertex& lambda, int a) {
    const int n = static_cast<int>(degree(lambda));
    FlagChain base = coordinate_flag(F, lambda);
    Vertex up = lambda;
    ++up[static_cast<size_t>(a) - 1];
    std::int64_t count = 0;
    for (const auto& flag : enumerate_flags(F, n + 1, static_cast<int>(lambda.size()))) {
        if (flag.type() == up && flag.project(n) == base) ++count;
    }
    return count;
}

bool extension_edge_relation_holds(const Vertex& lambda, int a, const Rational& q) {
    Rational qhat = q.inverse();
    std::int64_t expo = 0;
    for (int b = 1; b < a; ++b) expo += lambda[static_cast<size_t>(b) - 1];
    Rational lhs = qhat.pow(expo);
    std::int64_t n = degree(lambda);
    std::int64_t la_a = lambda[static_cast<size_t>(a) - 1];
    Rational rhs = edge_weight(lambda, a, q) * q.pow(la_a - n);
    return lhs == rhs;
}

namespace {

std::int64_t binom2(std::int64_t x) { return x * (x - 1) / 2; }

// Exponent g(la) with phi(la) = q^{g(la)} psi(la).
std::int64_t transform_exponent(const Vertex& la) {
    std::int64_t g = 0;
    for (int c : la) g += binom2(c);
    return g - binom2(degree(la));
}

}  // namespace

GibbsReport invariant_recursion_check(const LevelFunction& psi, const Rational& q) {
    const int d = psi.dims();
    Rational qhat = q.inverse();
    Vertex origin(static_cast<size_t>(d), 0);
    if (!psi.has(origin) || !psi.at(origin).is_one()) {
        return {false, origin, "psi(origin) != 1"};
    }
    for (const auto& [la, value] : psi.values()) {
        if (value.sign() < 0) return {false, la, "negative value"};
        if (degree(la) >= psi.max_level()) continue;
        Rational rhs(0);
        Vertex up = la;
        std::int64_t partial = 0;
        for (int a = 1; a <= d; ++a) {
            ++up[static_cast<size_t>(a) - 1];
            rhs += qhat.pow(partial) * psi.at(up);
            --up[static_cast<size_t>(a) - 1];
            partial += la[static_cast<size_t>(a) - 1];
        }
        if (rhs != value) return {false, la, "flag recursion fails"};
    }
    return {};
}

LevelFunction gibbs_to_invariant(const LevelFunction& phi, const Rational& q) {
    GibbsReport rec = gibbs_recursion_check(phi, q);
    if (!rec.ok) {
        throw std::invalid_argument("gibbs_to_invariant: input fails the Gibbs recursion at vertex " +
                                    word_to_string(Word(rec.witness.begin(), rec.witness.end())) +
                                    " (" + rec.detail + ")");
    }
    LevelFunction psi(phi.dims(), phi.max_level());
    for (const auto& [la, value] : phi.values()) {
        psi.set(la, value * q.pow(-transform_exponent(la)));
    }
    return psi;
}

LevelFunction invariant_to_gibbs(const LevelFunction& psi, const Rational& q) {
    GibbsReport rec = invariant_recursion_check(psi, q);
    if (!rec.ok) {
        throw std::invalid_argument("invariant_to_gibbs: input fails the flag recursion at vertex " +
                                    word_to_string(Word(rec.witness.begin(), rec.witness.end())) +
                                    " (" + rec.detail + ")");
    }
    LevelFunction phi(psi.dims(), psi.max_level());
    for (const auto& [la, value] : psi.values()) {
        phi.set(la, value * q.pow(transform_exponent(la)));
    }
    return phi;
}

InvariantReport invariant_measure_check(const LevelFunction& psi, int n_max,
                                        const GaloisField& F) {
    const int d = psi.dims();
    Vertex origin(static_cast<size_t>(d), 0);
    if (!psi.has(origin) || !psi.at(origin).is_one()) {
        return {false, origin, "psi(origin) != 1"};
    }
    if (n_max >= psi.max_level()) {
        throw std::invalid_argument("invariant_measure_check: need psi on levels 0..n_max+1");
    }

    for (int n = 0; n <= n_max; ++n) {
        std::map<Vertex, std::int64_t> counts;
        for (const auto& flag : enumerate_flags(F, n, d)) ++counts[flag.type()];
        Rational mass(0);
        for (const auto& [la, c] : counts) {
            if (psi.at(la).sign() < 0) return {false, la, "negative value"};
            mass += Rational(c) * psi.at(la);
        }
        if (!mass.is_one()) {
            return {false, Vertex(static_cast<size_t>(d), 0),
                    "level mass != 1 at level " + std::to_string(n)};
        }

        // Projection consistency. One pass over the flags of V_{n+1}: every
        // flag projects to a unique flag below, and its type exceeds the
        // projection's type by one e_a.
        auto upstairs = enumerate_flags(F, n + 1, d);
        for (const auto& la : vertices_at_level(d, n)) {
            FlagChain base = coordinate_flag(F, la);
            std::vector<std::int64_t> per_dir(static_cast<size_t>(d) + 1, 0);
            for (const auto& flag : upstairs) {
                if (!(flag.project(n) == base)) continue;
                Vertex up_type = flag.type();
                for (int a = 1; a <= d; ++a) {
                    if (up_type[static_cast<size_t>(a) - 1] == la[static_cast<size_t>(a) - 1] + 1) {
                        ++per_dir[static_cast<size_t>(a)];
                        break;
                    }
                }
            }
            Rational rhs(0);
            Vertex up = la;
            for (int a = 1; a <= d; ++a) {
                ++up[static_cast<size_t>(a) - 1];
                rhs += Rational(per_dir[static_cast<size_t>(a)]) * psi.at(up);
                --up[static_cast<size_t>(a) - 1];
            }
            if (rhs != psi.at(la)) return {false, la, "brute-force recursion fails"};
        }
    }
    return {};
}

}  // namespace qx
