#include "k3fib/poly.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace k3 {

namespace {

struct SymbolTable {
    std::mutex mu;
    std::deque<std::string> names; // stable references for var_name
    std::unordered_map<std::string, Var> ids;

    SymbolTable() {
        // fixed prefix so that printing order does not depend on call history
        static const char* const preset[] = {
            "t", "tau", "mu", "s", "u", "m", "b", "d", "h", "a", "mu1",
            "x", "y", "z", "x0", "x1", "x2", "w",
            "a2", "a3", "a4", "a5", "a6", "a7", "a8", "a9",
            "c1", "c2", "c3", "c4", "c5", "r"};
        for (const char* n : preset) add(n);
    }
    Var add(const std::string& n) {
        auto it = ids.find(n);
        if (it != ids.end()) return it->second;
        Var id = static_cast<Var>(names.size());
        names.push_back(n);
        ids.emplace(n, id);
        return id;
    }
};

SymbolTable& symbols() {
    static SymbolTable table;
    return table;
}

// descending graded lex; n = number of live exponent slots
inline int mono_cmp(const Mono& a, const Mono& b, std::size_t n) {
    if (a.deg != b.deg) return a.deg > b.deg ? 1 : -1;
    for (std::size_t i = 0; i < n; ++i)
        if (a.e[i] != b.e[i]) return a.e[i] > b.e[i] ? 1 : -1;
    return 0;
}

inline Mono mono_mul(const Mono& a, const Mono& b, std::size_t n) {
    Mono r;
    r.deg = a.deg + b.deg;
    for (std::size_t i = 0; i < n; ++i) {
        unsigned s = unsigned(a.e[i]) + unsigned(b.e[i]);
        if (s > 0xFFFFu) throw MathError("exponent overflow");
        r.e[i] = static_cast<std::uint16_t>(s);
    }
    return r;
}

std::vector<Var> merge_vars(const std::vector<Var>& a, const std::vector<Var>& b) {
    std::vector<Var> r;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    if (r.size() > static_cast<std::size_t>(Mono::kMaxVars))
        throw MathError("too many variables in one polynomial");
    return r;
}

template <class K>
std::vector<typename Poly<K>::Term> merge_terms(const std::vector<typename Poly<K>::Term>& a,
                                                const std::vector<typename Poly<K>::Term>& b,
                                                bool negate_b, std::size_t n) {
    std::vector<typename Poly<K>::Term> r;
    r.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        int c = mono_cmp(a[i].first, b[j].first, n);
        if (c > 0) {
            r.push_back(a[i++]);
        } else if (c < 0) {
            r.emplace_back(b[j].first, negate_b ? -b[j].second : b[j].second);
            ++j;
        } else {
            K s = negate_b ? a[i].second - b[j].second : a[i].second + b[j].second;
            if (!s.is_zero()) r.emplace_back(a[i].first, std::move(s));
            ++i;
            ++j;
        }
    }
    for (; i < a.size(); ++i) r.push_back(a[i]);
    for (; j < b.size(); ++j) r.emplace_back(b[j].first, negate_b ? -b[j].second : b[j].second);
    return r;
}

} // namespace

Var intern(std::string_view name) {
    auto& t = symbols();
    std::lock_guard<std::mutex> lock(t.mu);
    return t.add(std::string(name));
}

const std::string& var_name(Var v) {
    auto& t = symbols();
    std::lock_guard<std::mutex> lock(t.mu);
    if (v >= t.names.size()) throw MathError("unknown variable id");
    return t.names[v];
}

std::optional<Var> lookup_var(std::string_view name) {
    auto& t = symbols();
    std::lock_guard<std::mutex> lock(t.mu);
    auto it = t.ids.find(std::string(name));
    if (it == t.ids.end()) return std::nullopt;
    return it->second;
}

template <class K>
Poly<K>::Poly(const K& c) {
    if (!c.is_zero()) terms_.emplace_back(Mono{}, c);
}

template <class K>
Poly<K> Poly<K>::variable(Var v) {
    Poly p;
    p.vars_ = {v};
    Mono m;
    m.deg = 1;
    m.e[0] = 1;
    p.terms_.emplace_back(m, K(1));
    return p;
}

template <class K>
Poly<K> Poly<K>::monomial(const K& c, const std::vector<std::pair<Var, unsigned>>& powers) {
    std::vector<Var> vars;
    for (auto& [v, e] : powers)
        if (e > 0 && std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
    std::sort(vars.begin(), vars.end());
    Mono m;
    for (auto& [v, e] : powers) {
        if (e == 0) continue;
        auto pos = std::lower_bound(vars.begin(), vars.end(), v) - vars.begin();
        m.e[pos] = static_cast<std::uint16_t>(m.e[pos] + e);
        m.deg += e;
    }
    std::vector<Term> t;
    t.emplace_back(m, c);
    return from_terms(vars, std::move(t));
}

template <class K>
Poly<K> Poly<K>::from_terms(std::vector<Var> vars, std::vector<Term> terms) {
    std::size_t n = vars.size();
    if (n > static_cast<std::size_t>(Mono::kMaxVars)) throw MathError("too many variables in one polynomial");
    // sort variables by id, permuting exponents
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return vars[a] < vars[b]; });
    bool identity = true;
    for (std::size_t i = 0; i < n; ++i) identity = identity && perm[i] == i;
    for (std::size_t i = 1; i < n; ++i)
        if (vars[perm[i]] == vars[perm[i - 1]]) throw MathError("duplicate variable in term list");
    Poly p;
    p.vars_.resize(n);
    for (std::size_t i = 0; i < n; ++i) p.vars_[i] = vars[perm[i]];
    for (auto& t : terms) {
        Mono m;
        m.deg = 0;
        for (std::size_t i = 0; i < n; ++i) {
            m.e[i] = identity ? t.first.e[i] : t.first.e[perm[i]];
            m.deg += m.e[i];
        }
        t.first = m;
    }
    std::sort(terms.begin(), terms.end(),
              [n](const Term& a, const Term& b) { return mono_cmp(a.first, b.first, n) > 0; });
    for (auto& t : terms) {
        if (!p.terms_.empty() && p.terms_.back().first == t.first) {
            p.terms_.back().second += t.second;
            if (p.terms_.back().second.is_zero()) p.terms_.pop_back();
        } else if (!t.second.is_zero()) {
            p.terms_.push_back(std::move(t));
        }
    }
    p.canonicalize_vars();
    return p;
}

template <class K>
void Poly<K>::canonicalize_vars() {
    std::size_t n = vars_.size();
    if (n == 0) return;
    std::vector<bool> used(n, false);
    for (const auto& [m, c] : terms_)
        for (std::size_t i = 0; i < n; ++i)
            if (m.e[i]) used[i] = true;
    if (std::all_of(used.begin(), used.end(), [](bool b) { return b; })) return;
    std::vector<Var> nv;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < n; ++i)
        if (used[i]) {
            nv.push_back(vars_[i]);
            keep.push_back(i);
        }
    for (auto& [m, c] : terms_) {
        Mono r;
        r.deg = m.deg;
        for (std::size_t k = 0; k < keep.size(); ++k) r.e[k] = m.e[keep[k]];
        m = r;
    }
    vars_ = std::move(nv);
}

template <class K>
std::vector<typename Poly<K>::Term> Poly<K>::terms_over(const std::vector<Var>& target) const {
    if (target == vars_) return terms_;
    std::vector<std::size_t> pos(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        auto it = std::lower_bound(target.begin(), target.end(), vars_[i]);
        if (it == target.end() || *it != vars_[i]) throw MathError("terms_over: target misses a variable");
        pos[i] = static_cast<std::size_t>(it - target.begin());
    }
    std::vector<Term> r;
    r.reserve(terms_.size());
    for (const auto& [m, c] : terms_) {
        Mono x;
        x.deg = m.deg;
        for (std::size_t i = 0; i < vars_.size(); ++i) x.e[pos[i]] = m.e[i];
        r.emplace_back(x, c);
    }
    return r;
}

template <class K>
bool Poly<K>::contains(Var v) const {
    return std::binary_search(vars_.begin(), vars_.end(), v);
}

template <class K>
K Poly<K>::constant_value() const {
    if (!is_constant()) throw MathError("polynomial is not constant: " + str());
    return is_zero() ? K(0) : terms_[0].second;
}

template <class K>
int Poly<K>::degree(Var v) const {
    if (is_zero()) return -1;
    auto it = std::lower_bound(vars_.begin(), vars_.end(), v);
    if (it == vars_.end() || *it != v) return 0;
    std::size_t p = static_cast<std::size_t>(it - vars_.begin());
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max<int>(d, m.e[p]);
    return d;
}

template <class K>
int Poly<K>::total_degree() const {
    return is_zero() ? -1 : static_cast<int>(terms_[0].first.deg);
}

template <class K>
int Poly<K>::min_degree(Var v) const {
    if (is_zero()) return 0;
    auto it = std::lower_bound(vars_.begin(), vars_.end(), v);
    if (it == vars_.end() || *it != v) return 0;
    std::size_t p = static_cast<std::size_t>(it - vars_.begin());
    int d = 1 << 30;
    for (const auto& [m, c] : terms_) d = std::min<int>(d, m.e[p]);
    return d;
}

template <class K>
Poly<K> Poly<K>::shift_down(Var v, int k) const {
    if (k == 0) return *this;
    auto it = std::lower_bound(vars_.begin(), vars_.end(), v);
    if (it == vars_.end() || *it != v) throw MathError("shift_down: variable absent");
    std::size_t p = static_cast<std::size_t>(it - vars_.begin());
    Poly r = *this;
    for (auto& [m, c] : r.terms_) {
        if (m.e[p] < k) throw MathError("shift_down: not divisible");
        m.e[p] = static_cast<std::uint16_t>(m.e[p] - k);
        m.deg -= k;
    }
    r.canonicalize_vars();
    return r;
}

template <class K>
std::vector<Poly<K>> Poly<K>::coeffs_in(Var v) const {
    if (is_zero()) return {};
    auto it = std::lower_bound(vars_.begin(), vars_.end(), v);
    if (it == vars_.end() || *it != v) return {*this};
    std::size_t p = static_cast<std::size_t>(it - vars_.begin());
    int d = degree(v);
    std::vector<std::vector<Term>> buckets(d + 1);
    for (const auto& [m, c] : terms_) {
        Mono x = m;
        x.deg -= m.e[p];
        x.e[p] = 0;
        buckets[m.e[p]].emplace_back(x, c);
    }
    std::vector<Poly> out;
    out.reserve(d + 1);
    std::size_t n = vars_.size();
    for (auto& b : buckets) {
        // removing one coordinate can break the graded order; re-sort
        std::sort(b.begin(), b.end(), [n](const Term& x, const Term& y) { return mono_cmp(x.first, y.first, n) > 0; });
        Poly q;
        q.vars_ = vars_;
        q.terms_ = std::move(b);
        q.canonicalize_vars();
        out.push_back(std::move(q));
    }
    return out;
}

template <class K>
Poly<K> Poly<K>::coeff_of(Var v, int e) const {
    auto cs = coeffs_in(v);
    if (e < 0 || e >= static_cast<int>(cs.size())) return Poly();
    return cs[e];
}

template <class K>
Poly<K> Poly<K>::lc_in(Var v) const {
    auto cs = coeffs_in(v);
    return cs.empty() ? Poly() : cs.back();
}

template <class K>
Poly<K> Poly<K>::from_coeffs(Var v, const std::vector<Poly>& coeffs) {
    std::vector<Var> vars{v};
    for (const auto& c : coeffs) {
        if (c.contains(v)) throw MathError("from_coeffs: coefficient depends on the variable");
        vars = merge_vars(vars, c.vars_);
    }
    std::size_t p = static_cast<std::size_t>(std::lower_bound(vars.begin(), vars.end(), v) - vars.begin());
    std::vector<Term> terms;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        for (auto& [m, c] : coeffs[i].terms_over(vars)) {
            Mono x = m;
            x.e[p] = static_cast<std::uint16_t>(i);
            x.deg += static_cast<std::uint32_t>(i);
            terms.emplace_back(x, c);
        }
    }
    return from_terms(vars, std::move(terms));
}

template <class K>
Poly<K> Poly<K>::operator-() const {
    Poly r = *this;
    for (auto& t : r.terms_) t.second = -t.second;
    return r;
}

template <class K>
Poly<K> Poly<K>::add_(const Poly& a, const Poly& b, bool negate_b) {
    if (b.is_zero()) return a;
    if (a.is_zero()) return negate_b ? -b : b;
    Poly r;
    if (a.vars_ == b.vars_) {
        r.vars_ = a.vars_;
        r.terms_ = merge_terms<K>(a.terms_, b.terms_, negate_b, r.vars_.size());
    } else {
        r.vars_ = merge_vars(a.vars_, b.vars_);
        r.terms_ = merge_terms<K>(a.terms_over(r.vars_), b.terms_over(r.vars_), negate_b, r.vars_.size());
    }
    r.canonicalize_vars();
    return r;
}

template <class K>
Poly<K> Poly<K>::mul_(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    if (a.is_constant()) return b.scaled(a.terms_[0].second);
    if (b.is_constant()) return a.scaled(b.terms_[0].second);
    Poly r;
    r.vars_ = merge_vars(a.vars_, b.vars_);
    std::size_t n = r.vars_.size();
    auto ta = a.terms_over(r.vars_);
    auto tb = b.terms_over(r.vars_);
    if (ta.size() > tb.size()) std::swap(ta, tb);
    // each row (term of ta) * tb is already sorted; merge rows pairwise
    std::vector<std::vector<Term>> rows;
    rows.reserve(ta.size());
    for (const auto& [ma, ca] : ta) {
        std::vector<Term> row;
        row.reserve(tb.size());
        for (const auto& [mb, cb] : tb) row.emplace_back(mono_mul(ma, mb, n), ca * cb);
        rows.push_back(std::move(row));
    }
    while (rows.size() > 1) {
        std::vector<std::vector<Term>> next;
        next.reserve((rows.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < rows.size(); i += 2) next.push_back(merge_terms<K>(rows[i], rows[i + 1], false, n));
        if (rows.size() % 2) next.push_back(std::move(rows.back()));
        rows = std::move(next);
    }
    r.terms_ = std::move(rows[0]);
    r.canonicalize_vars();
    return r;
}

template <class K>
Poly<K> Poly<K>::scaled(const K& c) const {
    if (c.is_zero()) return Poly();
    Poly r = *this;
    for (auto& t : r.terms_) t.second *= c;
    return r;
}

template <class K>
Poly<K> Poly<K>::pow(unsigned e) const {
    Poly result(K(1)), base = *this;
    while (e) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return result;
}

template <class K>
Poly<K> Poly<K>::derivative(Var v) const {
    auto it = std::lower_bound(vars_.begin(), vars_.end(), v);
    if (it == vars_.end() || *it != v) return Poly();
    std::size_t p = static_cast<std::size_t>(it - vars_.begin());
    Poly r;
    r.vars_ = vars_;
    for (const auto& [m, c] : terms_) {
        if (m.e[p] == 0) continue;
        Mono x = m;
        x.e[p] -= 1;
        x.deg -= 1;
        r.terms_.emplace_back(x, c * K(static_cast<long>(m.e[p])));
    }
    r.canonicalize_vars();
    return r;
}

namespace {
template <class K>
Poly<K> balanced_sum(std::vector<Poly<K>> parts) {
    if (parts.empty()) return Poly<K>();
    while (parts.size() > 1) {
        std::vector<Poly<K>> next;
        for (std::size_t i = 0; i + 1 < parts.size(); i += 2) next.push_back(parts[i] + parts[i + 1]);
        if (parts.size() % 2) next.push_back(std::move(parts.back()));
        parts = std::move(next);
    }
    return parts[0];
}
} // namespace

template <class K>
Poly<K> Poly<K>::substitute(const std::map<Var, Poly>& bindings) const {
    std::vector<std::size_t> bound_pos;
    std::vector<const Poly*> bound_val;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        auto it = bindings.find(vars_[i]);
        if (it != bindings.end()) {
            bound_pos.push_back(i);
            bound_val.push_back(&it->second);
        }
    }
    if (bound_pos.empty()) return *this;
    // group terms by their bound exponents: f = sum_{bound mono} B(mono) * rest
    std::map<std::vector<std::uint16_t>, std::vector<Term>> groups;
    for (const auto& [m, c] : terms_) {
        std::vector<std::uint16_t> key(bound_pos.size());
        Mono rest = m;
        for (std::size_t k = 0; k < bound_pos.size(); ++k) {
            key[k] = m.e[bound_pos[k]];
            rest.deg -= m.e[bound_pos[k]];
            rest.e[bound_pos[k]] = 0;
        }
        groups[key].emplace_back(rest, c);
    }
    std::vector<std::vector<Poly>> powers(bound_pos.size());
    auto power = [&](std::size_t k, unsigned e) -> const Poly& {
        auto& pw = powers[k];
        if (pw.empty()) pw.push_back(Poly(K(1)));
        while (pw.size() <= e) pw.push_back(pw.back() * *bound_val[k]);
        return pw[e];
    };
    std::vector<Poly> parts;
    for (auto& [key, ts] : groups) {
        Poly rest = from_terms(vars_, std::move(ts));
        Poly prod = rest;
        for (std::size_t k = 0; k < key.size(); ++k)
            if (key[k]) prod = prod * power(k, key[k]);
        parts.push_back(std::move(prod));
    }
    return balanced_sum(std::move(parts));
}

template <class K>
Poly<K> Poly<K>::evaluate(Var v, const K& value) const {
    auto it = std::lower_bound(vars_.begin(), vars_.end(), v);
    if (it == vars_.end() || *it != v) return *this;
    std::size_t p = static_cast<std::size_t>(it - vars_.begin());
    int d = degree(v);
    std::vector<K> pw(d + 1, K(1));
    for (int i = 1; i <= d; ++i) pw[i] = pw[i - 1] * value;
    std::vector<Term> t;
    t.reserve(terms_.size());
    for (const auto& [m, c] : terms_) {
        Mono x = m;
        x.deg -= m.e[p];
        x.e[p] = 0;
        t.emplace_back(x, c * pw[m.e[p]]);
    }
    return from_terms(vars_, std::move(t));
}

template <class K>
Poly<K> Poly<K>::inflate(Var v, unsigned k) const {
    auto it = std::lower_bound(vars_.begin(), vars_.end(), v);
    if (it == vars_.end() || *it != v) return *this;
    std::size_t p = static_cast<std::size_t>(it - vars_.begin());
    std::vector<Term> t = terms_;
    for (auto& [m, c] : t) {
        m.deg += m.e[p] * (k - 1);
        m.e[p] = static_cast<std::uint16_t>(m.e[p] * k);
    }
    return from_terms(vars_, std::move(t));
}

template <class K>
Poly<K> Poly<K>::reverse_in(Var v, int d) const {
    if (is_zero()) return *this;
    if (d < degree(v)) throw MathError("reverse_in: weight below degree");
    std::vector<Var> vars = merge_vars(vars_, {v});
    std::size_t p = static_cast<std::size_t>(std::lower_bound(vars.begin(), vars.end(), v) - vars.begin());
    std::vector<Term> t = terms_over(vars);
    for (auto& [m, c] : t) {
        int e = d - m.e[p];
        m.deg = m.deg - m.e[p] + e;
        m.e[p] = static_cast<std::uint16_t>(e);
    }
    return from_terms(vars, std::move(t));
}

template <class K>
std::string Poly<K>::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        bool neg = coeff_negative(c);
        K a = neg ? -c : c;
        if (first) {
            if (neg) os << "-";
        } else {
            os << (neg ? " - " : " + ");
        }
        first = false;
        bool unit = a.is_one();
        bool has_mono = m.deg > 0;
        if (!unit || !has_mono) {
            os << coeff_str(a);
            if (has_mono) os << "*";
        }
        bool firstv = true;
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            if (!m.e[i]) continue;
            if (!firstv) os << "*";
            firstv = false;
            os << var_name(vars_[i]);
            if (m.e[i] > 1) os << "^" << m.e[i];
        }
    }
    return os.str();
}

std::string coeff_str(const Rational& c) { return c.str(); }
std::string coeff_str(const AlgebraicNumber& c) { return c.str(); }
bool coeff_negative(const Rational& c) { return c.sign() < 0; }
bool coeff_negative(const AlgebraicNumber& c) { return c.is_rational() && c.rational_value().sign() < 0; }

APoly to_algebraic(const QPoly& p) {
    return p.map_coeffs<AlgebraicNumber>([](const Rational& c) { return AlgebraicNumber(c); });
}

QPoly to_rational(const APoly& p) {
    return p.map_coeffs<Rational>([](const AlgebraicNumber& c) { return c.rational_value(); });
}

template class Poly<Rational>;
template class Poly<AlgebraicNumber>;

} // namespace k3
