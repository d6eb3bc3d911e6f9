#include "qx/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "qx/flags.hpp"
#include "qx/mallows.hpp"
#include "qx/pv.hpp"
#include "qx/pyramid.hpp"
#include "qx/quantize.hpp"
#include "qx/rng.hpp"
#include "qx/stats.hpp"

namespace qx {

namespace {

using json = nlohmann::ordered_json;

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

struct Common {
    std::string q;
    std::uint64_t seed = 1;
    std::int64_t samples = 100000;
    std::string format = "json";
    bool use_float = false;

    NumericMode mode() const { return use_float ? NumericMode::floating : NumericMode::exact; }
};

void add_common(CLI::App* cmd, Common& c, bool sampling = true) {
    cmd->add_option("--q", c.q, "deformation parameter, rational A/B or decimal")->required();
    if (sampling) {
        cmd->add_option("--seed", c.seed, "RNG seed");
        cmd->add_option("--samples", c.samples, "number of Monte-Carlo samples");
    }
    cmd->add_option("--format", c.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_flag("--float,!--exact", c.use_float, "float sampling mode (default exact)");
}

/// Parses q, rejecting q = 1 and q <= 0. q > 1 is allowed only when the
/// caller can apply the order-reversal reduction.
QParam parse_q(const Common& c, bool* reversed, const char* cmd_name) {
    QReversal norm = q_reversal_guard(Rational::from_string(c.q));
    if (norm.order_reversed && reversed == nullptr) {
        throw std::invalid_argument(
            std::string(cmd_name) +
            ": q > 1 reduces to q' = 1/q with the alphabet order reversed; this "
            "command cannot reverse an infinite alphabet, so pass q' and a reversed word instead");
    }
    if (reversed) *reversed = norm.order_reversed;
    return QParam(norm.q, c.mode());
}

json report_json(const DistanceReport& r) {
    return json{{"tv", r.tv},
                {"chi_square", r.chi_square},
                {"dof", r.dof},
                {"samples", r.samples},
                {"law", r.law}};
}

std::string csv_field(const std::string& s) {
    if (s.find(',') == std::string::npos && s.find('"') == std::string::npos) return s;
    std::string quoted = "\"";
    for (char ch : s) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    quoted += '"';
    return quoted;
}

json envelope(const char* command, const QParam& q) {
    return json{{"command", command},
                {"q", q.value().str()},
                {"mode", q.exact() ? "exact" : "float"},
                {"rng", kRngVersion}};
}

int cmd_sample_mallows(const Common& c, int n, const std::string& sampler, std::ostream& out) {
    bool reversed = false;
    QParam q = parse_q(c, &reversed, "sample-mallows");

    Word base(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) base[static_cast<size_t>(i)] = i + 1;

    std::map<Word, std::int64_t> counts;
    for (std::int64_t s = 0; s < c.samples; ++s) {
        RngStream rng(c.seed, static_cast<std::uint64_t>(s));
        Word w = sampler == "ranks" ? sample_mallows_by_ranks(n, q, rng).word()
                                    : q_shuffle(base, q, rng);
        if (reversed) {
            for (auto& a : w) a = n + 1 - a;
        }
        ++counts[w];
    }

    std::map<Word, Rational> exact;
    if (n <= 8) {
        for (const auto& [w, p] : mallows_law(n, q)) {
            Word key = w;
            if (reversed) {
                for (auto& a : key) a = n + 1 - a;
            }
            exact.emplace(key, p);
        }
    }

    if (c.format == "csv") {
        out << "word,count,empirical,exact\n";
        for (const auto& [w, cnt] : counts) {
            out << csv_field(word_to_string(w)) << ',' << cnt << ','
                << fmt(static_cast<double>(cnt) / static_cast<double>(c.samples)) << ',';
            auto it = exact.find(w);
            out << (it == exact.end() ? "" : it->second.str()) << '\n';
        }
        return 0;
    }

    json j = envelope("sample-mallows", q);
    j["n"] = n;
    j["sampler"] = sampler;
    j["seed"] = c.seed;
    j["samples"] = c.samples;
    j["order_reversed"] = reversed;
    json jc = json::object();
    for (const auto& [w, cnt] : counts) jc[word_to_string(w)] = cnt;
    j["counts"] = jc;
    if (!exact.empty()) {
        json je = json::object();
        for (const auto& [w, p] : exact) je[word_to_string(w)] = p.str();
        j["exact"] = je;
        j["report"] = report_json(
            compare_counts(counts, c.samples, exact, "mallows-n" + std::to_string(n)));
    }
    out << j.dump(2) << '\n';
    return 0;
}

int cmd_sample_pv(const Common& c, const std::string& vspec, int n, const std::string& backend,
                  std::ostream& out) {
    QParam q = parse_q(c, nullptr, "sample-pv");
    InversionFreeWord v = InversionFreeWord::parse(vspec);
    SampleBackend b = backend_from_string(backend);

    std::map<Word, std::int64_t> counts;
    int max_letter = 1;
    for (std::int64_t s = 0; s < c.samples; ++s) {
        RngStream rng(c.seed, static_cast<std::uint64_t>(s));
        Word w = sample_prefix(v, n, q, rng, b);
        max_letter = std::max(max_letter, *std::max_element(w.begin(), w.end()));
        ++counts[w];
    }

    if (!v.finite_support()) {
        max_letter = std::max(max_letter, v.tail_start());
        // Keep the exact enumeration tractable; observations beyond the
        // truncation are coarsened into one bucket below.
        while (max_letter > v.tail_start() && std::pow(static_cast<double>(max_letter),
                                                       static_cast<double>(n)) > 2e5) {
            --max_letter;
        }
    } else {
        max_letter = v.explicit_support().back().first;
    }
    TruncatedLaw law = marginal_law_truncated(v, n, q, max_letter);

    // TV and chi-square of the coarsened comparison: cells for each word of
    // the truncated law plus one bucket for everything beyond it.
    DistanceReport rep;
    rep.samples = c.samples;
    rep.law = "pv-marginal";
    double beyond = 0;
    for (const auto& [w, cnt] : counts) {
        if (!law.pmf.count(w)) beyond += static_cast<double>(cnt);
    }
    double tv = 0, chi = 0;
    std::int64_t cells = 0;
    for (const auto& [w, p] : law.pmf) {
        auto it = counts.find(w);
        double observed = it == counts.end() ? 0.0 : static_cast<double>(it->second);
        double pd = p.to_double();
        tv += std::fabs(observed / static_cast<double>(c.samples) - pd);
        if (pd > 0) {
            double expected = pd * static_cast<double>(c.samples);
            chi += (observed - expected) * (observed - expected) / expected;
            ++cells;
        }
    }
    double other = law.other.to_double();
    tv += std::fabs(beyond / static_cast<double>(c.samples) - other);
    if (other > 0) {
        double expected = other * static_cast<double>(c.samples);
        chi += (beyond - expected) * (beyond - expected) / expected;
        ++cells;
    }
    rep.tv = tv / 2.0;
    rep.chi_square = chi;
    rep.dof = cells > 0 ? cells - 1 : 0;

    if (c.format == "csv") {
        out << "word,count,empirical,exact\n";
        for (const auto& [w, cnt] : counts) {
            auto it = law.pmf.find(w);
            out << csv_field(word_to_string(w)) << ',' << cnt << ','
                << fmt(static_cast<double>(cnt) / static_cast<double>(c.samples)) << ','
                << (it == law.pmf.end() ? "" : it->second.str()) << '\n';
        }
        return 0;
    }

    json j = envelope("sample-pv", q);
    j["v"] = v.str();
    j["n"] = n;
    j["backend"] = backend;
    j["seed"] = c.seed;
    j["samples"] = c.samples;
    json jc = json::object();
    for (const auto& [w, cnt] : counts) jc[word_to_string(w)] = cnt;
    j["counts"] = jc;
    json je = json::object();
    for (const auto& [w, p] : law.pmf) je[word_to_string(w)] = p.str();
    j["exact"] = je;
    j["uncovered_exact_mass"] = law.other.str();
    j["report"] = report_json(rep);
    out << j.dump(2) << '\n';
    return 0;
}

int cmd_pv_marginal(const Common& c, const std::string& vspec, const std::string& useq,
                    std::ostream& out) {
    QParam q = parse_q(c, nullptr, "pv-marginal");
    InversionFreeWord v = InversionFreeWord::parse(vspec);
    Word u = word_from_string(useq);
    Rational p = marginal_probability(v, u, q);
    if (c.format == "csv") {
        out << "v,u,q,probability\n";
        out << csv_field(v.str()) << ',' << csv_field(word_to_string(u)) << ','
            << q.value().str() << ',' << p.str() << '\n';
        return 0;
    }
    json j = envelope("pv-marginal", q);
    j["v"] = v.str();
    j["u"] = word_to_string(u);
    j["probability"] = p.str();
    out << j.dump(2) << '\n';
    return 0;
}

int cmd_theta_pmf(const Common& c, int k, const std::string& matrix, std::ostream& out) {
    QParam q = parse_q(c, nullptr, "theta-pmf");
    if (!matrix.empty()) {
        MonomialMatrix m = MonomialMatrix::parse(matrix);
        if (m.size() != k) throw std::invalid_argument("theta-pmf: matrix size differs from --k");
        Rational p = truncation_pmf(m, q);
        if (c.format == "csv") {
            out << "matrix,probability\n" << m.bitspec() << ',' << p.str() << '\n';
            return 0;
        }
        json j = envelope("theta-pmf", q);
        j["k"] = k;
        j["matrix"] = m.bitspec();
        j["probability"] = p.str();
        out << j.dump(2) << '\n';
        return 0;
    }
    if (k > 4) throw std::invalid_argument("theta-pmf: full table supported for k <= 4");
    auto law = truncation_law(k, q);
    Rational sum(0);
    for (const auto& [m, p] : law) sum += p;
    if (c.format == "csv") {
        out << "matrix,probability\n";
        for (const auto& [m, p] : law) {
            out << m.bitspec() << ',' << p.str() << '\n';
        }
        return 0;
    }
    json j = envelope("theta-pmf", q);
    j["k"] = k;
    json table = json::object();
    for (const auto& [m, p] : law) table[m.bitspec()] = p.str();
    j["pmf"] = table;
    j["sum"] = sum.str();
    out << j.dump(2) << '\n';
    return 0;
}

Vertex parse_vertex(const std::string& s) {
    Vertex v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) v.push_back(std::stoi(tok));
    return v;
}

int cmd_pyramid_dim(const Common& c, int d, const std::string& lambda, std::ostream& out) {
    QParam q = parse_q(c, nullptr, "pyramid-dim");
    Vertex la = parse_vertex(lambda);
    if (static_cast<int>(la.size()) != d) {
        throw std::invalid_argument("pyramid-dim: --lambda length differs from --d");
    }
    Rational dim = dim_vertex(la, q.value());
    if (c.format == "csv") {
        out << "lambda,q,dim\n";
        out << csv_field(lambda) << "," << q.value().str() << "," << dim.str() << '\n';
        return 0;
    }
    json j = envelope("pyramid-dim", q);
    j["d"] = d;
    j["lambda"] = lambda;
    j["dim"] = dim.str();
    out << j.dump(2) << '\n';
    return 0;
}

std::vector<std::int64_t> parse_levels(const std::string& s) {
    auto dots = s.find("..");
    std::vector<std::int64_t> out;
    if (dots != std::string::npos) {
        std::int64_t lo = std::stoll(s.substr(0, dots));
        std::int64_t hi = std::stoll(s.substr(dots + 2));
        for (std::int64_t n = lo; n <= hi; ++n) out.push_back(n);
    } else {
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ',')) out.push_back(std::stoll(tok));
    }
    return out;
}

int cmd_martin(const Common& c, int d_opt, const std::string& mus, const std::string& hs,
               const std::string& levels, std::ostream& out) {
    QParam q = parse_q(c, nullptr, "martin");
    Vertex mu = parse_vertex(mus);
    HeightFunction h = HeightFunction::parse(hs);
    const int d = static_cast<int>(mu.size());
    if (d_opt != 0 && d_opt != d) {
        throw std::invalid_argument("martin: --d disagrees with the length of --mu");
    }
    if (!h.has_finite_domain() || h.domain_size() != d) {
        throw std::invalid_argument("martin: --h must list d values, last 'inf'");
    }
    for (int a = 1; a < d; ++a) {
        if (h.value(a).is_infinite()) {
            throw std::invalid_argument(
                "martin: built-in sequence needs h finite below a = d (growth in the last slot)");
        }
    }
    std::int64_t base = d > 1 ? h.value(d - 1).value() : 0;
    auto lambda_at = [&](std::int64_t n) {
        Vertex la(static_cast<size_t>(d));
        for (int a = 1; a < d; ++a) la[static_cast<size_t>(a) - 1] = static_cast<int>(h.increment(a).value());
        la[static_cast<size_t>(d) - 1] = static_cast<int>(n - base);
        return la;
    };
    std::vector<std::int64_t> grid = parse_levels(levels);
    for (std::int64_t n : grid) {
        if (n < base + static_cast<std::int64_t>(mu[static_cast<size_t>(d) - 1])) {
            throw std::invalid_argument("martin: level too small for the requested sequence");
        }
    }
    auto rows = kernel_convergence_table(mu, h, lambda_at, grid, q);
    if (c.format == "json") {
        json j = envelope("martin", q);
        j["mu"] = mus;
        j["h"] = h.str();
        json table = json::array();
        for (const auto& r : rows) {
            table.push_back(json{{"level", r.level},
                                 {"kernel", r.kernel},
                                 {"limit", r.limit},
                                 {"abs_err", r.abs_err}});
        }
        j["rows"] = table;
        out << j.dump(2) << '\n';
        return 0;
    }
    out << "level,kernel,limit,abs_err\n";
    for (const auto& r : rows) {
        out << r.level << ',' << fmt(r.kernel) << ',' << fmt(r.limit) << ',' << fmt(r.abs_err)
            << '\n';
    }
    return 0;
}

std::string vertex_str(const Vertex& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i]);
    }
    return out;
}

int cmd_flags_check(int qtilde, int n, int d, const std::string& from_v, std::ostream& out) {
    GaloisField F(qtilde);
    Rational q = Rational(1, qtilde);

    json j{{"command", "flags-check"}, {"qtilde", qtilde}, {"n", n}, {"d", d}};

    // Counts per type vs Gaussian multinomials evaluated at qtilde.
    bool counts_ok = true;
    json types = json::array();
    std::map<Vertex, std::int64_t> counts;
    for (const auto& flag : enumerate_flags(F, n, d)) ++counts[flag.type()];
    for (const auto& la : vertices_at_level(d, n)) {
        std::vector<std::int64_t> parts(la.begin(), la.end());
        Rational expected = gaussian_multinomial(parts, Rational(qtilde));
        std::int64_t got = counts.count(la) ? counts[la] : 0;
        bool ok = Rational(got) == expected;
        counts_ok = counts_ok && ok;
        types.push_back(json{{"type", vertex_str(la)},
                             {"flags", got},
                             {"gaussian_multinomial", expected.str()},
                             {"match", ok}});
    }
    j["type_counts"] = types;
    j["counts_match"] = counts_ok;

    // Brute-force extension counts vs the closed form, all vertices with
    // |la| < n, every direction.
    bool weights_ok = true;
    std::int64_t checked = 0;
    for (int level = 0; level < n; ++level) {
        for (const auto& la : vertices_at_level(d, level)) {
            for (int a = 1; a <= d; ++a) {
                std::int64_t brute = extension_count_bruteforce(F, la, a);
                std::int64_t formula = extension_count(la, a, qtilde);
                weights_ok = weights_ok && brute == formula;
                ++checked;
            }
        }
    }
    j["extension_counts"] = json{{"checked", checked}, {"match", weights_ok}};

    bool all_ok = counts_ok && weights_ok;
    if (!from_v.empty()) {
        InversionFreeWord v = InversionFreeWord::parse(from_v);
        QParam qp(q);
        LevelFunction phi = harmonic_from_word(v, d, n + 1, qp);
        LevelFunction psi = gibbs_to_invariant(phi, q);
        InvariantReport rep = invariant_measure_check(psi, n, F);
        j["pipeline"] = json{{"v", v.str()},
                             {"invariant_measure_ok", rep.ok},
                             {"detail", rep.ok ? "" : rep.detail}};
        all_ok = all_ok && rep.ok;
    }
    j["pass"] = all_ok;
    out << j.dump(2) << '\n';
    return all_ok ? 0 : 1;
}

int cmd_quantize(const Common& c, const std::string& pmf, int n, const std::string& grid,
                 std::ostream& out) {
    FinitePmf F = FinitePmf::parse(pmf);
    std::vector<Rational> qs;
    {
        std::stringstream ss(grid);
        std::string tok;
        while (std::getline(ss, tok, ',')) qs.push_back(Rational::from_string(tok));
    }
    for (const auto& q : qs) {
        QReversal norm = q_reversal_guard(q);
        if (norm.order_reversed) {
            throw std::invalid_argument("quantize: q-grid values must lie in (0,1)");
        }
    }
    auto rows = convergence_table(F, n, qs, c.samples, c.seed);
    if (c.format == "json") {
        json j{{"command", "quantize"}, {"pmf", pmf}, {"n", n}, {"rng", kRngVersion}};
        json table = json::array();
        for (const auto& r : rows) {
            json row{{"q", r.q.str()}, {"tv", r.tv}};
            if (r.has_empirical) row["tv_empirical"] = r.tv_empirical;
            table.push_back(row);
        }
        j["rows"] = table;
        out << j.dump(2) << '\n';
        return 0;
    }
    out << "q,tv,tv_empirical\n";
    for (const auto& r : rows) {
        out << r.q.str() << ',' << fmt(r.tv) << ','
            << (r.has_empirical ? fmt(r.tv_empirical) : std::string()) << '\n';
    }
    return 0;
}

int cmd_verify(std::ostream& out) {
    int failures = 0;
    auto check = [&](const std::string& name, bool ok) {
        out << (ok ? "PASS" : "FAIL") << "  " << name << '\n';
        if (!ok) ++failures;
    };

    QParam half(Rational(1, 2));
    QParam third(Rational(1, 3));

    {
        bool ok = true;
        for (const auto& q : {Rational(1, 3), Rational(1, 2), Rational(7, 10)}) {
            for (int n = 0; n <= 6 && ok; ++n) {
                Rational brute(0);
                for (const auto& sigma : symmetric_group(n)) {
                    brute += q.pow(inversions(sigma.word()));
                }
                ok = brute == q_factorial(n, q);
            }
        }
        check("sum of q^inv over S_n equals [n]_q!  (n <= 6)", ok);
    }
    {
        bool ok = true;
        for (int n = 1; n <= 6 && ok; ++n) {
            Rational total(0);
            for (const auto& sigma : symmetric_group(n)) total += mallows_pmf(sigma, half);
            ok = total.is_one();
        }
        check("Mallows pmf sums to 1 exactly (n <= 6)", ok);
    }
    {
        Word base{1, 2, 3, 4};
        auto dist = shuffle_distribution(base, half);
        bool ok = true;
        for (const auto& [w, p] : mallows_law(4, half)) ok = ok && dist.at(w) == p;
        check("q-shuffle of 1234 equals the Mallows law pointwise", ok);
    }
    {
        bool ok = verify_finite_q_exchangeable(shuffle_distribution({1, 1, 2, 3}, third),
                                               third.value())
                      .ok;
        check("shuffle distribution of 1123 is finitely q-exchangeable", ok);
    }
    {
        InversionFreeWord v = InversionFreeWord::parse("1:2,2:inf");
        bool ok = true;
        for (const Word& u : {Word{1, 1}, Word{2, 1}, Word{2, 2, 1}, Word{1, 2, 2}}) {
            PrefixState st(v);
            Rational prod(1);
            for (int a : u) {
                prod *= transition_probability(st, a, half);
                st.emit(a);
            }
            ok = ok && prod == marginal_probability(v, u, half);
        }
        check("marginal equals the transition product (v = 1:2,2:inf)", ok);
    }
    {
        bool ok = true;
        for (const auto& la : vertices_at_level(3, 6)) {
            ok = ok && dim_vertex(la, half.value()) == dim_by_paths(la, half.value());
        }
        check("dim by path enumeration equals the Gaussian multinomial (|la| = 6, d = 3)", ok);
    }
    {
        Rational sum(0);
        for (const auto& [m, p] : truncation_law(3, half)) sum += p;
        bool ok = sum.is_one();
        for (const auto& [m, p] : truncation_law(3, half)) {
            ok = ok && truncation_pmf(m.transpose(), half) == p;
        }
        check("truncation law sums to 1 and is transpose-invariant (k = 3)", ok);
    }
    {
        GaloisField F(2);
        bool ok = true;
        for (int level = 0; level < 3; ++level) {
            for (const auto& la : vertices_at_level(2, level)) {
                for (int a = 1; a <= 2; ++a) {
                    ok = ok && extension_count_bruteforce(F, la, a) == extension_count(la, a, 2);
                }
            }
        }
        InversionFreeWord v = InversionFreeWord::parse("1:1,2:inf");
        LevelFunction phi = harmonic_from_word(v, 2, 4, half);
        LevelFunction psi = gibbs_to_invariant(phi, half.value());
        ok = ok && invariant_measure_check(psi, 3, F).ok;
        check("flag extension counts and invariant-measure pipeline (qtilde = 2)", ok);
    }
    {
        FinitePmf F = FinitePmf::parse("0:1/2,1:1/2");
        auto rows = convergence_table(F, 1, {Rational(3, 5), Rational(9, 10), Rational(99, 100)});
        bool ok = rows[0].tv > rows[1].tv && rows[1].tv > rows[2].tv;
        check("quantization TV decreases along the q-grid", ok);
    }
    out << (failures == 0 ? "verify: all checks passed\n"
                          : "verify: " + std::to_string(failures) + " check(s) failed\n");
    return failures == 0 ? 0 : 1;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"q-exchangeable random words: exact q-combinatorics and samplers"};
    app.require_subcommand(1);

    // sample-mallows
    Common c_sm;
    int sm_n = 0;
    std::string sm_sampler = "ranks";
    auto* sm = app.add_subcommand("sample-mallows", "sample the finite Mallows law");
    sm->add_option("--n", sm_n, "permutation size")->required()->check(CLI::PositiveNumber);
    sm->add_option("--sampler", sm_sampler, "ranks|shuffle")
        ->check(CLI::IsMember({"ranks", "shuffle"}));
    add_common(sm, c_sm);

    // sample-pv
    Common c_pv;
    std::string pv_v;
    int pv_n = 0;
    std::string pv_backend = "positional";
    auto* spv = app.add_subcommand("sample-pv", "sample a prefix of the q-shuffle of v");
    spv->add_option("--v", pv_v, "inversion-free word, e.g. 1:2,2:inf or ;ones")->required();
    spv->add_option("--n", pv_n, "prefix length")->required()->check(CLI::PositiveNumber);
    spv->add_option("--backend", pv_backend, "positional|letterwise");
    add_common(spv, c_pv);

    // pv-marginal
    Common c_pm;
    std::string pm_v, pm_u;
    auto* pm = app.add_subcommand("pv-marginal", "exact prefix probability under the shuffle of v");
    pm->add_option("--v", pm_v)->required();
    pm->add_option("--u", pm_u, "prefix word, digits or comma-separated")->required();
    add_common(pm, c_pm, false);

    // theta-pmf
    Common c_tp;
    int tp_k = 0;
    std::string tp_matrix;
    auto* tp = app.add_subcommand("theta-pmf", "law of the k x k truncated Mallows matrix");
    tp->add_option("--k", tp_k)->required()->check(CLI::PositiveNumber);
    tp->add_option("--matrix", tp_matrix, "bitspec rows, e.g. 01;00");
    add_common(tp, c_tp, false);

    // pyramid-dim
    Common c_pd;
    int pd_d = 0;
    std::string pd_lambda;
    auto* pd = app.add_subcommand("pyramid-dim", "weighted path count of a lattice vertex");
    pd->add_option("--d", pd_d)->required()->check(CLI::PositiveNumber);
    pd->add_option("--lambda", pd_lambda, "comma-separated coordinates")->required();
    add_common(pd, c_pd, false);

    // martin
    Common c_ma;
    int ma_d = 0;
    std::string ma_mu, ma_h, ma_levels;
    auto* ma = app.add_subcommand("martin", "Martin kernel convergence toward a boundary point");
    // The documented option name --h collides with the default -h short help flag.
    ma->set_help_flag("--help", "print help");
    ma->add_option("--d", ma_d, "lattice dimension (optional, checked against --mu)");
    ma->add_option("--mu", ma_mu, "fixed vertex, comma-separated")->required();
    ma->add_option("--h", ma_h, "height function values, e.g. 1,inf")->required();
    ma->add_option("--levels", ma_levels, "grid, e.g. 5..60 or 5,10,20")->required();
    c_ma.format = "csv";
    add_common(ma, c_ma, false);

    // flags-check
    int fc_q = 2, fc_n = 3, fc_d = 2;
    std::string fc_from_v;
    auto* fc = app.add_subcommand("flags-check", "finite-field flag correspondence report");
    fc->add_option("--qtilde", fc_q, "field order (2,3,4,5,7,8,9)")->required();
    fc->add_option("--n", fc_n)->required();
    fc->add_option("--d", fc_d)->required();
    fc->add_option("--from-v", fc_from_v, "inversion-free word for the pipeline test");

    // quantize
    Common c_qz;
    std::string qz_pmf, qz_grid;
    int qz_n = 1;
    auto* qz = app.add_subcommand("quantize", "quantile-word marginals against the product law");
    qz->add_option("--pmf", qz_pmf, "finite pmf, e.g. 0:1/2,1:1/2")->required();
    qz->add_option("--n", qz_n, "marginal length")->check(CLI::PositiveNumber);
    qz->add_option("--q-grid", qz_grid, "comma-separated q values")->required();
    qz->add_option("--seed", c_qz.seed);
    qz->add_option("--samples", c_qz.samples, "0 = exact only");
    qz->add_option("--format", c_qz.format)->check(CLI::IsMember({"json", "csv"}));
    c_qz.samples = 0;

    // verify
    auto* vf = app.add_subcommand("verify", "run the exact-identity suites");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (sm->parsed()) return cmd_sample_mallows(c_sm, sm_n, sm_sampler, out);
        if (spv->parsed()) return cmd_sample_pv(c_pv, pv_v, pv_n, pv_backend, out);
        if (pm->parsed()) return cmd_pv_marginal(c_pm, pm_v, pm_u, out);
        if (tp->parsed()) return cmd_theta_pmf(c_tp, tp_k, tp_matrix, out);
        if (pd->parsed()) return cmd_pyramid_dim(c_pd, pd_d, pd_lambda, out);
        if (ma->parsed()) return cmd_martin(c_ma, ma_d, ma_mu, ma_h, ma_levels, out);
        if (fc->parsed()) return cmd_flags_check(fc_q, fc_n, fc_d, fc_from_v, out);
        if (qz->parsed()) return cmd_quantize(c_qz, qz_pmf, qz_n, qz_grid, out);
        if (vf->parsed()) return cmd_verify(out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    err << "error: no subcommand\n";
    return 1;
}

}  // namespace qx
