#include "k3fib/wire.hpp"

#include <cctype>

namespace k3 {

namespace {

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    QPoly parse() {
        QPoly r = expr();
        skip();
        if (i_ != s_.size()) fail("unexpected character");
        return r;
    }

private:
    std::string_view s_;
    std::size_t i_ = 0;

    [[noreturn]] void fail(const std::string& why) const {
        throw MathError("polynomial parse error at offset " + std::to_string(i_) + ": " + why + " in '" +
                        std::string(s_) + "'");
    }
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool eat(char c) {
        skip();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }
    QPoly expr() {
        QPoly r;
        bool first = true;
        while (true) {
            skip();
            int sign = 1;
            if (eat('-')) sign = -1;
            else if (eat('+')) sign = 1;
            else if (!first) break;
            QPoly t = term();
            r = sign > 0 ? r + t : r - t;
            first = false;
        }
        return r;
    }
    QPoly term() {
        QPoly r = power();
        while (true) {
            if (eat('*')) {
                r = r * power();
            } else if (eat('/')) {
                QPoly d = power();
                if (!d.is_constant() || d.is_zero()) fail("division by a non-constant or zero");
                r = r.scaled(d.constant_value().inverse());
            } else {
                break;
            }
        }
        return r;
    }
    QPoly power() {
        QPoly b = atom();
        if (eat('^')) {
            skip();
            std::size_t st = i_;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            if (st == i_) fail("expected exponent");
            b = b.pow(static_cast<unsigned>(std::stoul(std::string(s_.substr(st, i_ - st)))));
        }
        return b;
    }
    QPoly atom() {
        skip();
        if (i_ >= s_.size()) fail("unexpected end");
        char c = s_[i_];
        if (c == '(') {
            ++i_;
            QPoly r = expr();
            if (!eat(')')) fail("expected ')'");
            return r;
        }
        if (c == '-') {
            ++i_;
            return -power();
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t st = i_;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            return QPoly(Rational(Integer(std::string(s_.substr(st, i_ - st)), 10)));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t st = i_;
            while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
            return QPoly::variable(s_.substr(st, i_ - st));
        }
        fail("unexpected character");
    }
};

} // namespace

QPoly parse_poly(std::string_view text) { return Parser(text).parse(); }

QPoly poly_from_json(const json& j) {
    if (j.is_string()) return parse_poly(j.get<std::string>());
    if (j.is_number_integer()) return QPoly(Rational(j.get<long>()));
    if (!j.is_object() || !j.contains("terms")) throw MathError("polynomial JSON needs a \"terms\" array");
    std::vector<std::string> names;
    for (const char* key : {"vars", "params"})
        if (j.contains(key))
            for (const auto& n : j.at(key)) names.push_back(n.get<std::string>());
    std::vector<Var> vars;
    for (const auto& n : names) {
        Var v = intern(n);
        if (std::find(vars.begin(), vars.end(), v) != vars.end()) throw MathError("duplicate variable " + n);
        vars.push_back(v);
    }
    std::vector<QPoly::Term> terms;
    for (const auto& t : j.at("terms")) {
        Rational c = t.at("coeff").is_string() ? Rational::parse(t.at("coeff").get<std::string>())
                                               : Rational(t.at("coeff").get<long>());
        Mono m;
        if (t.contains("exps")) {
            for (auto it = t.at("exps").begin(); it != t.at("exps").end(); ++it) {
                auto pos = std::find(names.begin(), names.end(), it.key());
                if (pos == names.end()) throw MathError("exponent for undeclared variable " + it.key());
                long e = it.value().get<long>();
                if (e < 0 || e > 0xFFFF) throw MathError("bad exponent");
                m.e[pos - names.begin()] = static_cast<std::uint16_t>(e);
                m.deg += static_cast<std::uint32_t>(e);
            }
        }
        terms.emplace_back(m, c);
    }
    return QPoly::from_terms(vars, std::move(terms));
}

namespace {
template <class K, class CoeffFn>
json poly_json_impl(const Poly<K>& p, const std::vector<std::string>& base, CoeffFn coeff) {
    json out;
    std::vector<std::string> vars, params;
    for (Var v : p.vars()) {
        const std::string& n = var_name(v);
        if (std::find(base.begin(), base.end(), n) != base.end()) vars.push_back(n);
        else params.push_back(n);
    }
    // declared base variables are listed even when absent
    for (const auto& b : base)
        if (std::find(vars.begin(), vars.end(), b) == vars.end()) vars.push_back(b);
    out["vars"] = vars;
    out["params"] = params;
    json terms = json::array();
    for (const auto& [m, c] : p.terms()) {
        json t;
        t["coeff"] = coeff(c);
        json e = json::object();
        for (std::size_t i = 0; i < p.vars().size(); ++i)
            if (m.e[i]) e[var_name(p.vars()[i])] = m.e[i];
        t["exps"] = e;
        terms.push_back(t);
    }
    out["terms"] = terms;
    return out;
}
} // namespace

json poly_to_json(const QPoly& p, const std::vector<std::string>& base) {
    return poly_json_impl(p, base, [](const Rational& c) { return json(c.str()); });
}

json upoly_to_json(const UPolyQ& p) {
    json a = json::array();
    for (const auto& c : p) a.push_back(c.str());
    return a;
}

UPolyQ upoly_from_json(const json& j) {
    UPolyQ p;
    for (const auto& c : j) p.push_back(c.is_string() ? Rational::parse(c.get<std::string>()) : Rational(c.get<long>()));
    return p;
}

json poly_to_json(const APoly& p, const std::vector<std::string>& base) {
    std::shared_ptr<const NumberField> field;
    json out = poly_json_impl(p, base, [&](const AlgebraicNumber& c) {
        if (c.is_rational()) return json(c.rational_value().str());
        if (!field) field = c.field();
        json co;
        co["coords"] = upoly_to_json(c.coords());
        return co;
    });
    if (field) {
        out["field"]["minpoly"] = upoly_to_json(field->minpoly());
        out["field"]["gen"] = field->generator_name();
    }
    return out;
}

WeierstrassModel<Rational> model_from_json(const json& j) {
    if (!j.is_object() || !j.contains("A") || !j.contains("B")) throw MathError("model JSON needs \"A\" and \"B\"");
    WeierstrassModel<Rational> m;
    m.chi = j.value("chi", 2);
    if (m.chi != 1 && m.chi != 2) throw MathError("model JSON: chi must be 1 or 2");
    m.A = poly_from_json(j.at("A"));
    m.B = poly_from_json(j.at("B"));
    std::string t;
    if (j.contains("t")) {
        t = j.at("t").get<std::string>();
    } else {
        for (const char* key : {"A", "B"}) {
            const auto& p = j.at(key);
            if (p.is_object() && p.contains("vars") && p.at("vars").size() == 1) t = p.at("vars")[0].get<std::string>();
        }
        if (t.empty()) throw MathError("model JSON: give \"t\" or a single base variable under \"vars\"");
    }
    m.t = intern(t);
    m.check();
    return m;
}

json model_to_json(const WeierstrassModel<Rational>& m) {
    std::vector<std::string> base{var_name(m.t)};
    return json{{"chi", m.chi}, {"t", var_name(m.t)}, {"A", poly_to_json(m.A, base)}, {"B", poly_to_json(m.B, base)}};
}

} // namespace k3
