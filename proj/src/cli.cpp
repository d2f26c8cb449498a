#include "hepta/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hepta/algebra.hpp"
#include "hepta/core.hpp"
#include "hepta/matrix.hpp"
#include "hepta/oracle.hpp"
#include "hepta/rng.hpp"
#include "hepta/spectral.hpp"
#include "hepta/transform.hpp"

namespace hepta::cli {

namespace {

/// Fixed 17-significant-digit decimal form: enough digits to round-trip any
/// double, and stable byte-for-byte across runs. Non-finite values have no
/// JSON spelling and come out as null.
std::string format_double(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Minimal JSON emitter. Object keys must be written in strictly
/// increasing byte order; the writer enforces this so every report is
/// canonical and reruns stay byte-identical.
class JsonWriter {
public:
    void begin_object() {
        element_prefix();
        out_ += '{';
        frames_.push_back(Frame{true, "", 0, false});
    }

    void end_object() {
        pop_frame(true);
        out_ += '}';
        note_value();
    }

    void begin_array() {
        element_prefix();
        out_ += '[';
        frames_.push_back(Frame{false, "", 0, false});
    }

    void end_array() {
        pop_frame(false);
        out_ += ']';
        note_value();
    }

    void key(const std::string& k) {
        if (frames_.empty() || !frames_.back().is_object || frames_.back().key_pending)
            throw std::logic_error("json: key outside object");
        Frame& f = frames_.back();
        if (f.count > 0) {
            if (k <= f.last_key)
                throw std::logic_error("json: keys not in sorted order: " + k);
            out_ += ',';
        }
        append_string(k);
        out_ += ':';
        f.last_key = k;
        f.key_pending = true;
    }

    void value(double v) {
        element_prefix();
        out_ += format_double(v);
        note_value();
    }

    void value(long long v) {
        element_prefix();
        out_ += std::to_string(v);
        note_value();
    }

    void value(unsigned long long v) {
        element_prefix();
        out_ += std::to_string(v);
        note_value();
    }

    void value(bool v) {
        element_prefix();
        out_ += v ? "true" : "false";
        note_value();
    }

    void value(const std::string& v) {
        element_prefix();
        append_string(v);
        note_value();
    }

    void value_null() {
        element_prefix();
        out_ += "null";
        note_value();
    }

    std::string take() {
        if (!frames_.empty()) throw std::logic_error("json: unclosed scope");
        return std::move(out_);
    }

private:
    struct Frame {
        bool is_object;
        std::string last_key;
        int count;
        bool key_pending;
    };

    void element_prefix() {
        if (frames_.empty()) return;
        Frame& f = frames_.back();
        if (f.is_object) {
            if (!f.key_pending) throw std::logic_error("json: value without key");
        } else if (f.count > 0) {
            out_ += ',';
        }
    }

    void note_value() {
        if (frames_.empty()) return;
        Frame& f = frames_.back();
        f.count += 1;
        f.key_pending = false;
    }

    void pop_frame(bool object) {
        if (frames_.empty() || frames_.back().is_object != object ||
            frames_.back().key_pending)
            throw std::logic_error("json: mismatched scope close");
        frames_.pop_back();
    }

    void append_string(const std::string& s) {
        out_ += '"';
        for (char ch : s) {
            switch (ch) {
            case '"': out_ += "\\\""; break;
            case '\\': out_ += "\\\\"; break;
            case '\n': out_ += "\\n"; break;
            case '\t': out_ += "\\t"; break;
            case '\r': out_ += "\\r"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", ch);
                    out_ += buf;
                } else {
                    out_ += ch;
                }
            }
        }
        out_ += '"';
    }

    std::string out_;
    std::vector<Frame> frames_;
};

void write_spec(JsonWriter& w, const HeptaSpec& s) {
    w.begin_object();
    w.key("a");
    w.value(s.a);
    w.key("b");
    w.value(s.b);
    w.key("c");
    w.value(s.c);
    w.key("d");
    w.value(s.d);
    w.key("eta");
    w.value(s.eta);
    w.key("n");
    w.value(static_cast<long long>(s.n));
    w.key("xi");
    w.value(s.xi);
    w.end_object();
}

void write_report_head(JsonWriter& w, const char* command, bool fallback_used) {
    w.key("command");
    w.value(std::string(command));
    w.key("flags");
    w.begin_object();
    w.key("fallback_used");
    w.value(fallback_used);
    w.end_object();
}

const char* parity_name(Parity p) { return p == Parity::Odd ? "odd" : "even"; }

/// Map library errors onto the exit-code contract.
template <typename Fn>
int guarded(std::ostream& err, Fn&& body) {
    try {
        return body();
    } catch (const InvalidSpecError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DimensionMismatchError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const SingularLambdaError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInapplicable;
    } catch (const SingularStructureError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInapplicable;
    } catch (const oracle::SingularMatrixError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInapplicable;
    } catch (const FormulaInapplicableError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInapplicable;
    } catch (const std::bad_alloc&) {
        err << "error: problem size exceeds available memory\n";
        return kExitUsage;
    }
}

} // namespace

int run_spectrum(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() {
        const EigenSolution sol = eigenvalues(cfg.spec);
        if (cfg.format == Format::Csv) {
            out << "index,value,parity,enclosure_lower,enclosure_upper,deflated,residual\n";
            for (std::size_t k = 0; k < sol.eigenvalues.size(); ++k)
                out << (k + 1) << ',' << format_double(sol.eigenvalues[k]) << ','
                    << parity_name(sol.parity[k]) << ','
                    << format_double(sol.enclosures[k].lower) << ','
                    << format_double(sol.enclosures[k].upper) << ','
                    << (sol.deflated[k] ? 1 : 0) << ','
                    << format_double(sol.residuals[k]) << '\n';
            return kExitOk;
        }
        JsonWriter w;
        w.begin_object();
        write_report_head(w, "spectrum", sol.fallback_used);
        w.key("result");
        w.begin_object();
        w.key("eigenvalues");
        w.begin_array();
        for (std::size_t k = 0; k < sol.eigenvalues.size(); ++k) {
            w.begin_object();
            w.key("deflated");
            w.value(static_cast<bool>(sol.deflated[k]));
            w.key("enclosure_lower");
            w.value(sol.enclosures[k].lower);
            w.key("enclosure_upper");
            w.value(sol.enclosures[k].upper);
            w.key("parity");
            w.value(std::string(parity_name(sol.parity[k])));
            w.key("residual");
            w.value(sol.residuals[k]);
            w.key("value");
            w.value(sol.eigenvalues[k]);
            w.end_object();
        }
        w.end_array();
        w.end_object();
        w.key("spec");
        write_spec(w, cfg.spec);
        w.end_object();
        out << w.take() << '\n';
        return kExitOk;
    });
}

int run_det(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.format == Format::Csv) {
        err << "error: det emits a nested report; csv is limited to flat tables\n";
        return kExitUsage;
    }
    return guarded(err, [&]() {
        const DetResult det = determinant(cfg.spec);
        JsonWriter w;
        w.begin_object();
        write_report_head(w, "det", false);
        w.key("result");
        w.begin_object();
        w.key("even_factor");
        w.value(det.even_factor);
        w.key("odd_factor");
        w.value(det.odd_factor);
        w.key("scale_exponent");
        w.value(static_cast<long long>(det.scale_exponent));
        w.key("value");
        w.value(det.value);
        w.end_object();
        w.key("spec");
        write_spec(w, cfg.spec);
        w.end_object();
        out << w.take() << '\n';
        return kExitOk;
    });
}

int run_inverse(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() {
        const StructuredInverse inv = inverse(cfg.spec);
        const int n = inv.n;

        // Densify column by column; the result is symmetric so rows read off
        // the same values.
        Matrix dense(n, n);
        std::vector<double> basis(n, 0.0);
        for (int j = 0; j < n; ++j) {
            basis[j] = 1.0;
            const std::vector<double> col = apply_inverse(inv, basis);
            basis[j] = 0.0;
            for (int i = 0; i < n; ++i) dense(i, j) = col[i];
        }

        if (cfg.format == Format::Csv) {
            for (int j = 0; j < n; ++j) out << (j > 0 ? "," : "") << "c" << (j + 1);
            out << '\n';
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j)
                    out << (j > 0 ? "," : "") << format_double(dense(i, j));
                out << '\n';
            }
            return kExitOk;
        }

        JsonWriter w;
        w.begin_object();
        write_report_head(w, "inverse", false);
        w.key("result");
        w.begin_object();
        w.key("rho");
        w.value(inv.rho);
        w.key("rows");
        w.begin_array();
        for (int i = 0; i < n; ++i) {
            w.begin_array();
            for (int j = 0; j < n; ++j) w.value(dense(i, j));
            w.end_array();
        }
        w.end_array();
        w.key("varrho");
        w.value(inv.varrho);
        w.end_object();
        w.key("spec");
        write_spec(w, cfg.spec);
        w.end_object();
        out << w.take() << '\n';
        return kExitOk;
    });
}

int run_solve(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() {
        cfg.spec.validate();
        if (static_cast<int>(cfg.rhs.size()) != cfg.spec.n) {
            err << "error: solve needs a right-hand side of length n = "
                << cfg.spec.n << ", got " << cfg.rhs.size() << "\n";
            return kExitUsage;
        }
        const StructuredInverse inv = inverse(cfg.spec);
        const std::vector<double> x = apply_inverse(inv, cfg.rhs);

        const BandMatrix h = build_H(cfg.spec);
        const std::vector<double> hx = h.entries * x;
        double residual = 0.0;
        for (int i = 0; i < cfg.spec.n; ++i)
            residual = std::max(residual, std::fabs(hx[i] - cfg.rhs[i]));

        if (cfg.format == Format::Csv) {
            out << "index,value\n";
            for (std::size_t i = 0; i < x.size(); ++i)
                out << (i + 1) << ',' << format_double(x[i]) << '\n';
            return kExitOk;
        }

        JsonWriter w;
        w.begin_object();
        write_report_head(w, "solve", false);
        w.key("result");
        w.begin_object();
        w.key("residual_inf");
        w.value(residual);
        w.key("solution");
        w.begin_array();
        for (double xi : x) w.value(xi);
        w.end_array();
        w.end_object();
        w.key("spec");
        write_spec(w, cfg.spec);
        w.end_object();
        out << w.take() << '\n';
        return kExitOk;
    });
}

namespace {

struct CheckState {
    double max_normalized = 0.0;
    bool pass = true;
};

struct FirstFailure {
    bool present = false;
    std::string check;
    HeptaSpec spec;
    int trial = -1;
};

struct VerifyState {
    CheckState block_reassembly;
    CheckState determinant_vs_lu;
    CheckState eigenvalue_vs_oracle;
    CheckState eigenvector_residual;
    CheckState inverse_residual;
    CheckState s_involution;
    int failures = 0;
    FirstFailure first;
    int generic_trials = 0;
    int generic_fallbacks = 0;
    int skipped_inverse = 0;
    bool any_fallback = false;
};

void score(VerifyState& vs, CheckState& cs, const char* name, double error,
           double tolerance, const HeptaSpec& spec, int trial) {
    const double normalized = error / tolerance;
    if (normalized > cs.max_normalized) cs.max_normalized = normalized;
    if (normalized > 1.0) {
        cs.pass = false;
        vs.failures += 1;
        if (!vs.first.present) {
            vs.first.present = true;
            vs.first.check = name;
            vs.first.spec = spec;
            vs.first.trial = trial;
        }
    }
}

/// Deterministic trial spec: dimension parity alternates with the trial
/// index; a quarter of the trials pin the coupling to exact rank one
/// (vartheta = 0), half force it safely away from zero, the rest are free.
HeptaSpec generate_trial_spec(Rng& rng, int trial) {
    HeptaSpec s;
    s.n = (trial % 2 == 0) ? 2 * rng.uniform_int(3, 20)
                           : 2 * rng.uniform_int(2, 19) + 1;
    s.a = rng.uniform(-5.0, 5.0);
    s.b = rng.uniform(-5.0, 5.0);
    s.c = rng.uniform(-5.0, 5.0);
    s.d = rng.uniform(-5.0, 5.0);
    s.xi = rng.uniform(-5.0, 5.0);
    s.eta = rng.uniform(-5.0, 5.0);
    const int cls = trial % 4;
    if (cls == 3) {
        s.eta = s.b - s.d; // vartheta exactly zero
    } else if (cls == 0 || cls == 1) {
        while (std::fabs((s.d + s.eta) - s.b) < 1e-3)
            s.eta = rng.uniform(-5.0, 5.0);
    }
    return s;
}

void write_check(JsonWriter& w, const char* name, const CheckState& cs) {
    w.key(name);
    w.begin_object();
    w.key("max_normalized_error");
    w.value(cs.max_normalized);
    w.key("pass");
    w.value(cs.pass);
    w.end_object();
}

} // namespace

int run_verify(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.format == Format::Csv) {
        err << "error: verify emits a nested report; csv is limited to flat tables\n";
        return kExitUsage;
    }
    if (cfg.trials < 1) {
        err << "error: verify needs at least one trial\n";
        return kExitUsage;
    }

    VerifyState vs;
    Rng rng(cfg.seed);

    for (int trial = 0; trial < cfg.trials; ++trial) {
        const HeptaSpec spec = generate_trial_spec(rng, trial);
        const int n = spec.n;
        const bool generic = (trial % 4 == 0 || trial % 4 == 1);
        if (generic) vs.generic_trials += 1;

        const BandMatrix h = build_H(spec);
        const double h_scale = 1.0 + max_abs(h.entries);

        const SineTransform s(n);
        const ParityPermutation p(n);
        const BlockPair pair = block_diagonalize(spec);

        // Involution of the sine transform.
        {
            const Matrix ss = s.entries() * s.entries();
            score(vs, vs.s_involution, "s_involution",
                  max_abs_diff(ss, Matrix::identity(n)), 1e-12, spec, trial);
        }

        // Block split reassembles the original matrix.
        score(vs, vs.block_reassembly, "block_reassembly",
              max_abs_diff(assemble_from_blocks(pair, s, p), h.entries),
              1e-10 * h_scale, spec, trial);

        // Closed-form spectrum against the dense eigensolver.
        const oracle::EigenResult dense = oracle::jacobi_eigen(oracle::DenseSym(h.entries));
        const EigenSolution sol = eigenvalues(spec);
        vs.any_fallback = vs.any_fallback || sol.fallback_used;
        if (generic && sol.fallback_used) vs.generic_fallbacks += 1;
        {
            double worst = 0.0;
            for (int k = 0; k < n; ++k)
                worst = std::max(worst,
                                 std::fabs(sol.eigenvalues[k] - dense.values[k]));
            score(vs, vs.eigenvalue_vs_oracle, "eigenvalue_vs_oracle", worst,
                  1e-9 * h_scale, spec, trial);
        }

        // Determinant identity against pivoted elimination.
        {
            const double lu = oracle::lu_det(h.entries).to_double();
            const DetResult det = determinant(spec);
            const double diff = std::fabs(det.value - lu);
            const double error = std::fabs(lu) > 1.0 ? diff / std::fabs(lu) : diff;
            score(vs, vs.determinant_vs_lu, "determinant_vs_lu", error, 1e-8,
                  spec, trial);
        }

        // Structured inverse residual, skipped near singularity where no
        // meaningful inverse exists to compare against.
        {
            double min_ev = HUGE_VAL;
            double max_ev = 0.0;
            for (double ev : dense.values) {
                min_ev = std::min(min_ev, std::fabs(ev));
                max_ev = std::max(max_ev, std::fabs(ev));
            }
            if (min_ev < 1e-6 * (1.0 + max_ev)) {
                vs.skipped_inverse += 1;
            } else {
                try {
                    const StructuredInverse inv = inverse(spec);
                    double worst = 0.0;
                    std::vector<double> basis(n, 0.0);
                    for (int j = 0; j < n; ++j) {
                        basis[j] = 1.0;
                        const std::vector<double> col = apply_inverse(inv, basis);
                        basis[j] = 0.0;
                        const std::vector<double> hcol = h.entries * col;
                        for (int i = 0; i < n; ++i) {
                            const double want = (i == j) ? 1.0 : 0.0;
                            worst = std::max(worst, std::fabs(hcol[i] - want));
                        }
                    }
                    score(vs, vs.inverse_residual, "inverse_residual", worst,
                          1e-8, spec, trial);
                } catch (const SingularLambdaError&) {
                    vs.skipped_inverse += 1;
                } catch (const SingularStructureError&) {
                    vs.skipped_inverse += 1;
                }
            }
        }

        // Closed-form eigenvectors; hypothesis violations must raise the
        // typed error and then succeed through dense inverse iteration.
        {
            const oracle::DenseSym dense_h(h.entries);
            double worst = 0.0;
            bool fallback_ok = true;
            for (int k = 0; k < n; ++k) {
                try {
                    const std::vector<double> q =
                        eigenvector(spec, sol.eigenvalues[k], sol.parity[k]);
                    const std::vector<double> hq = h.entries * q;
                    double num = 0.0;
                    for (int i = 0; i < n; ++i) {
                        const double r = hq[i] - sol.eigenvalues[k] * q[i];
                        num += r * r;
                    }
                    const double qn = norm2(q);
                    if (qn > 0.0)
                        worst = std::max(worst, std::sqrt(num) / qn);
                    else
                        fallback_ok = false;
                } catch (const FormulaInapplicableError&) {
                    try {
                        oracle::inverse_iteration(dense_h, sol.eigenvalues[k]);
                    } catch (const oracle::ConvergenceError&) {
                        fallback_ok = false;
                    }
                }
            }
            score(vs, vs.eigenvector_residual, "eigenvector_residual", worst,
                  1e-8 * h_scale, spec, trial);
            if (!fallback_ok)
                score(vs, vs.eigenvector_residual, "eigenvector_residual",
                      HUGE_VAL, 1e-8 * h_scale, spec, trial);
        }
    }

    const double fallback_rate =
        vs.generic_trials > 0
            ? static_cast<double>(vs.generic_fallbacks) / vs.generic_trials
            : 0.0;
    if (fallback_rate >= 0.05) {
        vs.failures += 1;
        if (!vs.first.present) {
            vs.first.present = true;
            vs.first.check = "fallback_rate_generic";
            vs.first.spec = HeptaSpec{};
            vs.first.trial = -1;
        }
    }

    JsonWriter w;
    w.begin_object();
    write_report_head(w, "verify", vs.any_fallback);
    w.key("result");
    w.begin_object();
    w.key("checks");
    w.begin_object();
    write_check(w, "block_reassembly", vs.block_reassembly);
    write_check(w, "determinant_vs_lu", vs.determinant_vs_lu);
    write_check(w, "eigenvalue_vs_oracle", vs.eigenvalue_vs_oracle);
    write_check(w, "eigenvector_residual", vs.eigenvector_residual);
    write_check(w, "inverse_residual", vs.inverse_residual);
    write_check(w, "s_involution", vs.s_involution);
    w.end_object();
    w.key("failures");
    w.value(static_cast<long long>(vs.failures));
    w.key("fallback_rate_generic");
    w.value(fallback_rate);
    w.key("first_failure");
    if (vs.first.present) {
        w.begin_object();
        w.key("check");
        w.value(vs.first.check);
        w.key("spec");
        write_spec(w, vs.first.spec);
        w.key("trial");
        w.value(static_cast<long long>(vs.first.trial));
        w.end_object();
    } else {
        w.value_null();
    }
    w.key("generic_trials");
    w.value(static_cast<long long>(vs.generic_trials));
    w.key("seed");
    w.value(static_cast<unsigned long long>(cfg.seed));
    w.key("skipped_inverse");
    w.value(static_cast<long long>(vs.skipped_inverse));
    w.key("trials");
    w.value(static_cast<long long>(cfg.trials));
    w.end_object();
    w.key("spec");
    w.value_null();
    w.end_object();
    out << w.take() << '\n';

    if (vs.failures > 0) {
        err << "verify: " << vs.failures << " check failure(s)";
        if (vs.first.present && vs.first.trial >= 0) {
            const HeptaSpec& s = vs.first.spec;
            err << "; first at trial " << vs.first.trial << " (" << vs.first.check
                << ") with spec n=" << s.n << " a=" << format_double(s.a)
                << " b=" << format_double(s.b) << " c=" << format_double(s.c)
                << " d=" << format_double(s.d) << " xi=" << format_double(s.xi)
                << " eta=" << format_double(s.eta) << "; rerun with --seed "
                << cfg.seed;
        }
        err << "\n";
        return kExitVerifyFailed;
    }
    return kExitOk;
}

int run(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
    std::ofstream file;
    std::ostream* sink = &out;
    if (!cfg.out_path.empty()) {
        file.open(cfg.out_path, std::ios::binary | std::ios::trunc);
        if (!file) {
            err << "error: cannot open output file " << cfg.out_path << "\n";
            return kExitUsage;
        }
        sink = &file;
    }
    switch (cfg.command) {
    case Command::Spectrum: return run_spectrum(cfg, *sink, err);
    case Command::Det: return run_det(cfg, *sink, err);
    case Command::Inverse: return run_inverse(cfg, *sink, err);
    case Command::Solve: return run_solve(cfg, *sink, err);
    case Command::Verify: return run_verify(cfg, *sink, err);
    }
    err << "error: unknown command\n";
    return kExitUsage;
}

} // namespace hepta::cli
