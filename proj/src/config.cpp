#include "hq/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace hq {

namespace {

struct RawValue {
    std::string text;
    bool quoted = false;
    bool used = false;
};

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// key -> raw value; quoted values keep their content verbatim
std::map<std::string, RawValue> read_lines(const std::string& text) {
    std::map<std::string, RawValue> out;
    std::istringstream stream(text);
    std::string line;
    int lineno = 0;
    while (std::getline(stream, line)) {
        ++lineno;
        // comments start at '#' outside quotes
        bool in_quote = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') in_quote = !in_quote;
            if (line[i] == '#' && !in_quote) {
                line.resize(i);
                break;
            }
        }
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) +
                              ": expected `section.key = value`");
        const std::string key = trim(stripped.substr(0, eq));
        std::string value = trim(stripped.substr(eq + 1));
        if (key.empty() || key.find('.') == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) +
                              ": keys take the form section.key");
        RawValue raw;
        if (!value.empty() && value.front() == '"') {
            if (value.size() < 2 || value.back() != '"')
                throw ConfigError("line " + std::to_string(lineno) +
                                  ": unterminated quoted value");
            raw.text = value.substr(1, value.size() - 2);
            raw.quoted = true;
        } else {
            raw.text = value;
        }
        if (out.count(key))
            throw ConfigError("duplicate key `" + key + "`");
        out.emplace(key, std::move(raw));
    }
    return out;
}

class ConfigReader {
public:
    explicit ConfigReader(std::map<std::string, RawValue> values)
        : values_(std::move(values)) {}

    [[nodiscard]] bool has(const std::string& key) const {
        return values_.count(key) > 0;
    }

    std::optional<std::string> take_string(const std::string& key, bool quoted) {
        auto it = values_.find(key);
        if (it == values_.end()) return std::nullopt;
        it->second.used = true;
        if (quoted != it->second.quoted)
            throw ConfigError("`" + key + "` must " +
                              (quoted ? "be a quoted expression" : "not be quoted"));
        return it->second.text;
    }

    std::optional<double> take_real(const std::string& key) {
        const auto raw = take_string(key, false);
        if (!raw) return std::nullopt;
        return parse_real(key, *raw);
    }

    std::optional<int> take_int(const std::string& key) {
        const auto raw = take_string(key, false);
        if (!raw) return std::nullopt;
        int v = 0;
        const char* b = raw->data();
        const char* e = b + raw->size();
        const auto res = std::from_chars(b, e, v);
        if (res.ec != std::errc() || res.ptr != e)
            throw ConfigError("`" + key + "` expects an integer, got `" + *raw + "`");
        return v;
    }

    std::optional<bool> take_bool(const std::string& key) {
        const auto raw = take_string(key, false);
        if (!raw) return std::nullopt;
        if (*raw == "true") return true;
        if (*raw == "false") return false;
        throw ConfigError("`" + key + "` expects true or false");
    }

    std::optional<Eigen::VectorXd> take_reals(const std::string& key) {
        const auto raw = take_string(key, false);
        if (!raw) return std::nullopt;
        std::istringstream s(*raw);
        std::vector<double> vals;
        std::string tok;
        while (s >> tok) vals.push_back(parse_real(key, tok));
        if (vals.empty()) throw ConfigError("`" + key + "` expects numbers");
        return Eigen::Map<const Eigen::VectorXd>(vals.data(),
                                                 static_cast<long>(vals.size()));
    }

    std::optional<std::vector<int>> take_ints(const std::string& key) {
        const auto raw = take_string(key, false);
        if (!raw) return std::nullopt;
        std::istringstream s(*raw);
        std::vector<int> vals;
        std::string tok;
        while (s >> tok) {
            int v = 0;
            const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
                throw ConfigError("`" + key + "` expects integers");
            vals.push_back(v);
        }
        if (vals.empty()) throw ConfigError("`" + key + "` expects integers");
        return vals;
    }

    void reject_unknown() const {
        for (const auto& [key, raw] : values_)
            if (!raw.used) throw ConfigError("unknown key `" + key + "`");
    }

private:
    static double parse_real(const std::string& key, const std::string& tok) {
        double v = 0.0;
        const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
            throw ConfigError("`" + key + "` expects a number, got `" + tok + "`");
        return v;
    }

    std::map<std::string, RawValue> values_;
};

int require_int(ConfigReader& reader, const std::string& key) {
    const auto v = reader.take_int(key);
    if (!v) throw ConfigError("missing required key `" + key + "`");
    return *v;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    ConfigReader reader(read_lines(text));

    const int n = require_int(reader, "problem.n");
    const int p = require_int(reader, "problem.p");
    const int k = require_int(reader, "problem.k");
    const int l = require_int(reader, "problem.l");
    OperatorSignature sig = [&] {
        try {
            return OperatorSignature(n, p, k, l);
        } catch (const InvalidInputError& e) {
            throw ConfigError(e.what());
        }
    }();

    const auto domain_kind = reader.take_string("problem.domain", false);
    if (!domain_kind) throw ConfigError("missing required key `problem.domain`");
    std::variant<BoxDomain, BallDomain> domain = BoxDomain{};
    if (*domain_kind == "box") {
        const auto lo = reader.take_reals("problem.box_lo");
        const auto hi = reader.take_reals("problem.box_hi");
        if (!lo || !hi)
            throw ConfigError("box domains need problem.box_lo and problem.box_hi");
        domain = BoxDomain{*lo, *hi};
    } else if (*domain_kind == "ball") {
        const auto radius = reader.take_real("problem.ball_radius");
        if (!radius) throw ConfigError("ball domains need problem.ball_radius");
        const auto center = reader.take_reals("problem.ball_center");
        domain = BallDomain{center ? *center : Eigen::VectorXd::Zero(n), *radius};
    } else {
        throw ConfigError("problem.domain must be box or ball");
    }

    const auto psi_raw = reader.take_string("problem.psi", true);
    const auto psi_tilde_raw = reader.take_string("problem.psi_tilde", true);
    if (static_cast<bool>(psi_raw) == static_cast<bool>(psi_tilde_raw))
        throw ConfigError("give exactly one of problem.psi and problem.psi_tilde");
    const auto phi_raw = reader.take_string("problem.phi", true);
    if (!phi_raw) throw ConfigError("missing required key `problem.phi`");

    auto parse_expr = [n](const std::string& what, const std::string& src) {
        try {
            return ExprAst::parse(src, n);
        } catch (const ParseError& e) {
            throw ConfigError(what + ": " + e.what());
        }
    };
    ExprAst psi_tilde = psi_tilde_raw
                            ? parse_expr("problem.psi_tilde", *psi_tilde_raw)
                            : parse_expr("problem.psi", *psi_raw);
    if (psi_raw && sig.k - sig.l != 1)
        psi_tilde = psi_tilde.to_power(1.0 / (sig.k - sig.l));
    ExprAst phi = parse_expr("problem.phi", *phi_raw);

    StructuralConstants structural;
    structural.c0 = reader.take_real("structural.c0");
    structural.alpha0 = reader.take_real("structural.alpha0");
    structural.gamma = reader.take_real("structural.gamma");
    structural.C1 = reader.take_real("structural.C1");
    structural.M1 = reader.take_real("structural.M1");

    RunConfig cfg{ProblemSpec{sig, std::move(domain), std::move(psi_tilde),
                              std::move(phi), structural},
                  {},
                  33,
                  {},
                  {},
                  {},
                  {}};

    if (const auto dims = reader.take_ints("solver.dims")) cfg.dims = *dims;
    if (const auto m = reader.take_int("solver.radial_nodes")) cfg.radial_nodes = *m;
    if (const auto sweep = reader.take_ints("solver.sweep")) cfg.sweep = *sweep;
    if (const auto v = reader.take_real("solver.tol_r")) cfg.newton.tol_r = *v;
    if (const auto v = reader.take_real("solver.tol_b")) cfg.newton.tol_b = *v;
    if (const auto v = reader.take_real("solver.margin")) cfg.newton.margin = *v;
    if (const auto v = reader.take_int("solver.max_iter")) cfg.newton.max_iter = *v;
    if (const auto v = reader.take_real("solver.A0")) cfg.newton.A0 = *v;
    if (const auto v = reader.take_real("solver.t_step0")) cfg.newton.t_step0 = *v;
    if (const auto v = reader.take_real("solver.t_step_floor"))
        cfg.newton.t_step_floor = *v;

    if (const auto v = reader.take_int("verify.samples")) cfg.sampler.samples = *v;
    if (const auto v = reader.take_real("verify.u_range")) cfg.sampler.u_range = *v;
    if (const auto v = reader.take_real("verify.p_max")) cfg.sampler.p_max = *v;

    if (const auto v = reader.take_string("output.dir", false)) cfg.output.dir = *v;
    if (const auto v = reader.take_bool("output.emit_field")) cfg.output.emit_field = *v;
    if (const auto v = reader.take_bool("output.emit_report"))
        cfg.output.emit_report = *v;

    reader.reject_unknown();

    if (std::holds_alternative<BoxDomain>(cfg.problem.domain)) {
        if (cfg.dims.empty()) cfg.dims.assign(static_cast<std::size_t>(n), 9);
        if (static_cast<int>(cfg.dims.size()) != n)
            throw ConfigError("solver.dims needs one node count per axis");
    }

    try {
        validate_problem(cfg.problem);
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file `" + path + "`");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace hq
