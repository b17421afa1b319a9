#include "everett/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "everett/asymptotics.hpp"
#include "everett/branching.hpp"
#include "everett/cat.hpp"
#include "everett/random.hpp"

namespace everett {

namespace {

using nlohmann::json;
using Command = ExperimentConfig::Command;
using Format = ExperimentConfig::Format;

constexpr double kInvarianceTol = 1e-10;

std::string fmt17(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

std::string join_counts(const std::vector<std::int64_t>& counts, char sep = '|') {
    std::ostringstream out;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (i > 0) {
            out << sep;
        }
        out << counts[i];
    }
    return out.str();
}

std::string join_doubles(const std::vector<double>& values, char sep = '|') {
    std::ostringstream out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) {
            out << sep;
        }
        out << fmt17(values[i]);
    }
    return out.str();
}

/// Simple CSV assembly with a fixed column set per command.
class CsvBuilder {
public:
    explicit CsvBuilder(const std::vector<std::string>& columns) {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (i > 0) {
                out_ << ',';
            }
            out_ << columns[i];
        }
        out_ << '\n';
        width_ = columns.size();
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < width_; ++i) {
            if (i > 0) {
                out_ << ',';
            }
            if (i < cells.size()) {
                out_ << cells[i];
            }
        }
        out_ << '\n';
    }

    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
    std::size_t width_ = 0;
};

struct NormalizedConfig {
    std::vector<double> coeffs;
    Coefficients coefficients;
    cat::SuperpositionParams params{0.0, 0.0};
};

void require(bool ok, const std::string& message) {
    if (!ok) {
        throw ConfigError(message);
    }
}

NormalizedConfig validate(const ExperimentConfig& config, std::vector<std::string>& warnings) {
    NormalizedConfig out;

    const bool uses_coeffs = config.command == Command::born ||
                             config.command == Command::classes ||
                             config.command == Command::residual;
    const bool uses_a_sq = config.command == Command::cat ||
                           config.command == Command::complement ||
                           config.command == Command::invariance;

    if (uses_coeffs) {
        require(!config.coeffs.empty(), "at least one outcome measure is required");
        double sum = 0.0;
        for (double c : config.coeffs) {
            require(std::isfinite(c) && c >= 0.0, "outcome measures must be nonnegative");
            sum += c;
        }
        require(sum > 0.0, "outcome measures must not be all zero");
        if (std::abs(sum - 1.0) > 1e-6) {
            warnings.push_back("outcome measures sum to " + fmt17(sum) +
                               "; renormalizing to 1");
        }
        out.coeffs.reserve(config.coeffs.size());
        for (double c : config.coeffs) {
            out.coeffs.push_back(c / sum);
        }
        out.coefficients = Coefficients::from_measures(out.coeffs);
    }

    if (config.command == Command::invariance) {
        require(config.n >= 0, "trial count must be nonnegative");
        if (config.n == 0) {
            warnings.push_back("0 trials requested; the invariance check is vacuous");
        }
    } else {
        require(config.n >= 1, "n must be at least 1");
    }
    if (config.command == Command::born) {
        require(config.epsilon > 0.0 && config.epsilon <= 1.0, "epsilon must be in (0, 1]");
    }
    if (uses_a_sq) {
        require(config.a_sq > 0.0 && config.a_sq < 1.0, "a-sq must be strictly inside (0, 1)");
        out.params = cat::SuperpositionParams::make(Amplitude(std::sqrt(config.a_sq), 0.0),
                                                    Amplitude(std::sqrt(1.0 - config.a_sq), 0.0));
    }
    return out;
}

json config_echo(const ExperimentConfig& config, const NormalizedConfig& normalized) {
    json echo;
    echo["coeffs"] = normalized.coeffs;
    echo["n"] = config.n;
    echo["epsilon"] = config.epsilon;
    echo["a_sq"] = config.a_sq;
    echo["seed"] = config.seed;
    echo["format"] = format_name(config.format);
    return echo;
}

json header(const ExperimentConfig& config, const NormalizedConfig& normalized) {
    json h;
    h["command"] = command_name(config.command);
    h["version"] = kVersion;
    h["config"] = config_echo(config, normalized);
    return h;
}

std::vector<double> fractions_of(const CountClass& cls, std::int64_t n) {
    std::vector<double> fractions;
    fractions.reserve(cls.counts.size());
    for (std::int64_t c : cls.counts) {
        fractions.push_back(static_cast<double>(c) / static_cast<double>(n));
    }
    return fractions;
}

Report run_born(const ExperimentConfig& config, const NormalizedConfig& normalized) {
    Report report;
    json rows = json::array();
    CsvBuilder csv({"N", "modal_counts", "modal_tie", "modal_fractions", "typicality",
                    "chebyshev_floor"});
    for (std::int64_t n : sweep_points(config.n)) {
        const ModalClassResult modal = modal_class(normalized.coefficients, n);
        const MeasureValue typicality =
            typicality_measure(normalized.coefficients, n, config.epsilon);
        const double floor = chebyshev_floor(normalized.coefficients, n, config.epsilon);
        const std::vector<double> fractions = fractions_of(modal.cls, n);

        json row;
        row["N"] = n;
        row["modal_counts"] = modal.cls.counts;
        row["modal_tie"] = modal.tie;
        row["modal_fractions"] = fractions;
        row["typicality"] = typicality.linear;
        row["chebyshev_floor"] = floor;
        rows.push_back(std::move(row));

        csv.row({std::to_string(n), join_counts(modal.cls.counts),
                 modal.tie ? "true" : "false", join_doubles(fractions),
                 fmt17(typicality.linear), fmt17(floor)});
    }
    report.document["body"]["rows"] = std::move(rows);
    report.csv = csv.str();
    return report;
}

Report run_classes(const ExperimentConfig& config, const NormalizedConfig& normalized) {
    const std::size_t m = normalized.coefficients.size();
    // C(n + m - 1, m - 1) rows; refuse unbounded dumps.
    double row_estimate = 1.0;
    for (std::size_t i = 1; i < m; ++i) {
        row_estimate *= static_cast<double>(config.n + static_cast<std::int64_t>(i)) /
                        static_cast<double>(i);
    }
    require(row_estimate <= 2e6, "class table too large; reduce n or the outcome count");

    Report report;
    json rows = json::array();
    CsvBuilder csv({"counts", "multiplicity", "log_multiplicity", "measure", "log_measure",
                    "reachable"});
    ClassMeasureTable table(normalized.coefficients, config.n);
    for_each_count_class(config.n, m, [&](const CountClass& cls) {
        const bool reachable = class_is_reachable(normalized.coefficients, cls);
        const double log_multiplicity = class_count_log(cls);
        const double log_measure = table.log_measure(cls);
        const double measure = reachable ? std::exp(log_measure) : 0.0;

        const std::string multiplicity =
            config.n <= 1000 ? class_count(cls).get_str() : std::string{};

        json row;
        row["counts"] = cls.counts;
        if (multiplicity.empty()) {
            row["multiplicity"] = nullptr;
        } else {
            row["multiplicity"] = multiplicity;
        }
        row["log_multiplicity"] = log_multiplicity;
        row["measure"] = measure;
        if (reachable) {
            row["log_measure"] = log_measure;
        } else {
            row["log_measure"] = nullptr;
        }
        row["reachable"] = reachable;
        rows.push_back(std::move(row));

        csv.row({join_counts(cls.counts), multiplicity, fmt17(log_multiplicity),
                 fmt17(measure), reachable ? fmt17(log_measure) : std::string{},
                 reachable ? "true" : "false"});
    });
    report.document["body"]["rows"] = std::move(rows);
    report.csv = csv.str();
    return report;
}

Report run_residual(const ExperimentConfig& config, const NormalizedConfig& normalized) {
    Report report;
    json rows = json::array();
    CsvBuilder csv({"N", "modal_counts", "modal_measure", "residual", "vanishes"});
    bool vanishes_at_max_n = false;
    for (std::int64_t n : sweep_points(config.n)) {
        const ResidualResult r = residual_measure(normalized.coefficients, n);
        const MeasureValue modal = class_measure(normalized.coefficients, r.modal_rounded);
        const bool vanishes = r.residual.linear < 0.5;
        vanishes_at_max_n = vanishes;

        json row;
        row["N"] = n;
        row["modal_counts"] = r.modal_rounded.counts;
        row["modal_measure"] = modal.linear;
        row["residual"] = r.residual.linear;
        row["vanishes"] = vanishes;
        rows.push_back(std::move(row));

        csv.row({std::to_string(n), join_counts(r.modal_rounded.counts), fmt17(modal.linear),
                 fmt17(r.residual.linear), vanishes ? "true" : "false"});
    }
    report.document["body"]["rows"] = std::move(rows);
    report.document["body"]["vanishes_at_max_n"] = vanishes_at_max_n;
    report.csv = csv.str();
    return report;
}

json state_term_rows(const StateVector& state) {
    json rows = json::array();
    for (const auto& [label, amp] : state.terms()) {
        json row;
        row["type"] = "term";
        row["object"] = cat::object_alphabet().name(label.object_part.at(0));
        row["record"] = cat::record_name(label.memory_part);
        row["amplitude_re"] = amp.real();
        row["amplitude_im"] = amp.imag();
        rows.push_back(std::move(row));
    }
    return rows;
}

Report run_cat(const NormalizedConfig& normalized) {
    Report report;
    const StateVector state = cat::observe_superposition(normalized.params);

    json rows = state_term_rows(state);
    CsvBuilder csv({"type", "object", "record", "amplitude_re", "amplitude_im", "measure"});
    for (const auto& [label, amp] : state.terms()) {
        csv.row({"term", cat::object_alphabet().name(label.object_part.at(0)),
                 cat::record_name(label.memory_part), fmt17(amp.real()), fmt17(amp.imag()),
                 std::string{}});
    }
    for (const auto& [reg, measure] : cat::branch_measures(state)) {
        json row;
        row["type"] = "record_measure";
        row["record"] = cat::record_name(reg);
        row["measure"] = measure.linear;
        rows.push_back(std::move(row));
        csv.row({"record_measure", std::string{}, cat::record_name(reg), std::string{},
                 std::string{}, fmt17(measure.linear)});
    }
    report.document["body"]["rows"] = std::move(rows);
    report.csv = csv.str();
    return report;
}

Report run_complement(const NormalizedConfig& normalized) {
    Report report;
    // Throws ObstructionError (exit code 3) unless |a| = |b|.
    LinearOperator observer = cat::build_superposition_observer(normalized.params);
    const double residual = unitarity_residual(observer);

    json rows = json::array();
    CsvBuilder csv({"type", "input", "row", "col", "re", "im", "object", "record", "value"});

    const auto& basis = cat::joint_basis();
    for (std::size_t i = 0; i < basis.size(); ++i) {
        json row;
        row["type"] = "basis";
        row["row"] = i;
        row["object"] = cat::object_alphabet().name(basis[i].object_part.at(0));
        row["record"] = cat::record_name(basis[i].memory_part);
        rows.push_back(std::move(row));
        csv.row({"basis", std::string{}, std::to_string(i), std::string{}, std::string{},
                 std::string{}, cat::object_alphabet().name(basis[i].object_part.at(0)),
                 cat::record_name(basis[i].memory_part), std::string{}});
    }

    for (int i = 0; i < observer.matrix().rows(); ++i) {
        for (int j = 0; j < observer.matrix().cols(); ++j) {
            const Amplitude entry = observer.matrix()(i, j);
            json row;
            row["type"] = "matrix_entry";
            row["row"] = i;
            row["col"] = j;
            row["re"] = entry.real();
            row["im"] = entry.imag();
            rows.push_back(std::move(row));
            csv.row({"matrix_entry", std::string{}, std::to_string(i), std::to_string(j),
                     fmt17(entry.real()), fmt17(entry.imag()), std::string{}, std::string{},
                     std::string{}});
        }
    }

    {
        json row;
        row["type"] = "unitarity";
        row["value"] = residual;
        rows.push_back(std::move(row));
        csv.row({"unitarity", std::string{}, std::string{}, std::string{}, std::string{},
                 std::string{}, std::string{}, std::string{}, fmt17(residual)});
    }

    const Amplitude a = normalized.params.a;
    const Amplitude b = normalized.params.b;
    const std::vector<std::pair<std::string, std::map<std::vector<Symbol>, Amplitude>>>
        inputs{{"live", {{{static_cast<Symbol>(cat::CatState::live)}, 1.0}}},
               {"dead", {{{static_cast<Symbol>(cat::CatState::dead)}, 1.0}}},
               {"plus",
                {{{static_cast<Symbol>(cat::CatState::live)}, a},
                 {{static_cast<Symbol>(cat::CatState::dead)}, b}}},
               {"minus",
                {{{static_cast<Symbol>(cat::CatState::live)}, a},
                 {{static_cast<Symbol>(cat::CatState::dead)}, -b}}}};
    const StateVector blank =
        make_memory_state(cat::memory_alphabet(), {{RecordRegister{}, 1.0}});
    for (const auto& [name, object_terms] : inputs) {
        const StateVector prepared =
            tensor(make_object_state(cat::object_alphabet(), object_terms), blank);
        const StateVector out = apply(observer, prepared);
        for (const auto& [reg, measure] : cat::branch_measures(out)) {
            json row;
            row["type"] = "record_measure";
            row["input"] = name;
            row["record"] = cat::record_name(reg);
            row["measure"] = measure.linear;
            rows.push_back(std::move(row));
            csv.row({"record_measure", name, std::string{}, std::string{}, std::string{},
                     std::string{}, std::string{}, cat::record_name(reg),
                     fmt17(measure.linear)});
        }
    }

    report.document["body"]["rows"] = std::move(rows);
    report.document["body"]["unitarity_residual"] = residual;
    report.csv = csv.str();
    return report;
}

Report run_invariance(const ExperimentConfig& config, const NormalizedConfig& normalized) {
    Report report;
    json rows = json::array();
    CsvBuilder csv({"trial", "seed", "a_sq", "max_deviation"});

    std::mt19937_64 engine(config.seed);
    double worst = 0.0;
    for (std::int64_t trial = 0; trial < config.n; ++trial) {
        LinearOperator rotation = cat::object_operator(haar_unitary(2, engine));
        if (!is_unitary(rotation, kInvarianceTol)) {
            throw Error("random rotation failed the unitarity check");
        }
        const cat::InvarianceCheckResult check =
            cat::basis_invariance_check(normalized.params, rotation, kInvarianceTol);
        worst = std::max(worst, check.max_deviation);

        json row;
        row["trial"] = trial;
        row["max_deviation"] = check.max_deviation;
        rows.push_back(std::move(row));
        csv.row({std::to_string(trial), std::to_string(config.seed), fmt17(config.a_sq),
                 fmt17(check.max_deviation)});
    }

    report.document["body"]["rows"] = std::move(rows);
    report.document["body"]["trials"] = config.n;
    report.document["body"]["max_deviation"] = worst;
    report.document["body"]["passed"] = worst <= kInvarianceTol;
    report.csv = csv.str();
    return report;
}

}  // namespace

const char* command_name(ExperimentConfig::Command command) {
    switch (command) {
        case Command::born: return "born";
        case Command::classes: return "classes";
        case Command::residual: return "residual";
        case Command::cat: return "cat";
        case Command::complement: return "complement";
        case Command::invariance: return "invariance";
    }
    return "unknown";
}

const char* format_name(ExperimentConfig::Format format) {
    return format == Format::json ? "json" : "csv";
}

std::vector<std::int64_t> sweep_points(std::int64_t n) {
    std::vector<std::int64_t> points;
    for (std::int64_t p = 1; p < n; p *= 2) {
        points.push_back(p);
    }
    points.push_back(n);
    return points;
}

Report run_experiment(const ExperimentConfig& config) {
    std::vector<std::string> warnings;
    const NormalizedConfig normalized = validate(config, warnings);

    Report report;
    switch (config.command) {
        case Command::born: report = run_born(config, normalized); break;
        case Command::classes: report = run_classes(config, normalized); break;
        case Command::residual: report = run_residual(config, normalized); break;
        case Command::cat: report = run_cat(normalized); break;
        case Command::complement: report = run_complement(normalized); break;
        case Command::invariance: report = run_invariance(config, normalized); break;
    }
    report.document["header"] = header(config, normalized);
    report.warnings = std::move(warnings);
    return report;
}

std::string render(const Report& report, ExperimentConfig::Format format) {
    if (format == Format::json) {
        return report.document.dump(2) + "\n";
    }
    return report.csv;
}

}  // namespace everett
