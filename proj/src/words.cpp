#include "qx/words.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qx {

std::string word_to_string(const Word& w) {
    bool compact = std::all_of(w.begin(), w.end(), [](int a) { return a >= 1 && a <= 9; });
    std::string out;
    for (size_t i = 0; i < w.size(); ++i) {
        if (!compact && i > 0) out += ',';
        out += std::to_string(w[i]);
    }
    return out;
}

Word word_from_string(const std::string& s) {
    Word w;
    if (s.find(',') != std::string::npos) {
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ',')) w.push_back(std::stoi(tok));
    } else {
        for (char c : s) {
            if (c < '1' || c > '9') throw std::invalid_argument("word: bad letter '" + s + "'");
            w.push_back(c - '0');
        }
    }
    return w;
}

namespace {

std::int64_t merge_count(std::vector<int>& a, std::vector<int>& buf, size_t lo, size_t hi) {
    if (hi - lo <= 1) return 0;
    size_t mid = lo + (hi - lo) / 2;
    std::int64_t inv = merge_count(a, buf, lo, mid) + merge_count(a, buf, mid, hi);
    size_t i = lo, j = mid, k = lo;
    while (i < mid && j < hi) {
        if (a[j] < a[i]) {
            inv += static_cast<std::int64_t>(mid - i);
            buf[k++] = a[j++];
        } else {
            buf[k++] = a[i++];
        }
    }
    while (i < mid) buf[k++] = a[i++];
    while (j < hi) buf[k++] = a[j++];
    std::copy(buf.begin() + lo, buf.begin() + hi, a.begin() + lo);
    return inv;
}

}  // namespace

std::int64_t inversions(const Word& w) {
    std::vector<int> a = w;
    std::vector<int> buf(a.size());
    return merge_count(a, buf, 0, a.size());
}

std::int64_t inversions_quadratic(const Word& w) {
    std::int64_t inv = 0;
    for (size_t i = 0; i < w.size(); ++i)
        for (size_t j = i + 1; j < w.size(); ++j)
            if (w[i] > w[j]) ++inv;
    return inv;
}

Permutation::Permutation(std::vector<int> images) : img_(std::move(images)) {
    std::vector<bool> seen(img_.size() + 1, false);
    for (int v : img_) {
        if (v < 1 || v > static_cast<int>(img_.size()) || seen[v]) {
            throw std::invalid_argument("Permutation: images are not a bijection of 1..n");
        }
        seen[v] = true;
    }
}

Permutation Permutation::identity(int n) {
    std::vector<int> img(n);
    std::iota(img.begin(), img.end(), 1);
    return Permutation(std::move(img));
}

Permutation Permutation::transposition(int n, int i, int j) {
    if (i < 1 || j < 1 || i > n || j > n) {
        throw std::invalid_argument("Permutation: transposition out of range");
    }
    std::vector<int> img(n);
    std::iota(img.begin(), img.end(), 1);
    std::swap(img[i - 1], img[j - 1]);
    return Permutation(std::move(img));
}

Permutation Permutation::inverse() const {
    std::vector<int> inv(img_.size());
    for (int i = 1; i <= size(); ++i) inv[(*this)(i) - 1] = i;
    return Permutation(std::move(inv));
}

Permutation Permutation::compose(const Permutation& other) const {
    if (size() != other.size()) {
        throw std::invalid_argument("Permutation: size mismatch in compose");
    }
    std::vector<int> img(img_.size());
    for (int i = 1; i <= size(); ++i) img[i - 1] = (*this)(other(i));
    return Permutation(std::move(img));
}

Word apply_positions(const Permutation& sigma, const Word& w) {
    const int n = static_cast<int>(w.size());
    for (int i = n + 1; i <= sigma.size(); ++i) {
        if (sigma(i) != i) {
            throw std::invalid_argument("apply_positions: sigma moves a position outside the word");
        }
    }
    Permutation inv = sigma.inverse();
    Word out(w.size());
    for (int i = 1; i <= n; ++i) {
        int src = i <= sigma.size() ? inv(i) : i;
        out[i - 1] = w[src - 1];
    }
    return out;
}

std::int64_t inversion_cocycle(const Permutation& sigma, const Word& w) {
    // Positions past the support of sigma contribute equally to both words,
    // so the difference over the supplied prefix is already the stable value.
    Word moved = apply_positions(sigma, w);
    return inversions(moved) - inversions(w);
}

Rational cocycle_density(const Permutation& sigma, const Word& w, const Rational& q) {
    return q.pow(inversion_cocycle(sigma, w));
}

bool cocycle_additivity_holds(const Permutation& sigma, const Permutation& tau, const Word& w) {
    std::int64_t lhs = inversion_cocycle(sigma.compose(tau), w);
    std::int64_t rhs = inversion_cocycle(sigma, apply_positions(tau, w)) +
                       inversion_cocycle(tau, w);
    return lhs == rhs;
}

Word pushforward(const Word& w, const std::function<int(int)>& f) {
    Word out;
    out.reserve(w.size());
    for (int a : w) out.push_back(f(a));
    return out;
}

}  // namespace qx
