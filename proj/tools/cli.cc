// Copyright 2026 The xeblab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iterator>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "xeblab/analysis.h"
#include "xeblab/circuit.h"
#include "xeblab/errors.h"
#include "xeblab/estimators.h"
#include "xeblab/parallel.h"
#include "xeblab/samplers.h"
#include "xeblab/simulator.h"
#include "xeblab/xeb.h"

namespace xeblab {

namespace {

class IoError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// A pass/fail outcome that is not an error.
struct Verdict {
    bool pass = true;
};

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(fmt::format("cannot open '{}' for reading", path));
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string &path, std::string_view contents) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw IoError(fmt::format("cannot open '{}' for writing", path));
    }
    f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!f) {
        throw IoError(fmt::format("failed writing '{}'", path));
    }
}

/// Writes to `path`, or to `out` when the path is empty.
void emit(const std::string &path, std::string_view contents, std::ostream &out) {
    if (path.empty()) {
        out << contents;
    } else {
        write_file(path, contents);
    }
}

/// Turns a key=value block into a two-line CSV (header, values).
std::string key_values_to_csv(const std::string &text) {
    std::string header, values;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            continue;
        }
        if (!header.empty()) {
            header += ',';
            values += ',';
        }
        header += line.substr(0, eq);
        values += line.substr(eq + 1);
    }
    return header + "\n" + values + "\n";
}

struct GlobalOptions {
    size_t threads = 0;
    size_t max_qubits = 22;
};

struct DistributionFlags {
    size_t n = 0;
    size_t depth = 20;
    std::string topology = "auto";
    size_t rows = 0;
    size_t cols = 0;
    bool no_mask = false;

    void add_to(CLI::App *cmd, size_t default_depth = 20) {
        depth = default_depth;
        cmd->add_option("--n", n, "Qubit count")->required()->check(CLI::Range(size_t{1}, kMaxCircuitQubits));
        cmd->add_option("--depth", depth, "Gate layers before the final mask")->capture_default_str();
        cmd->add_option("--topology", topology, "auto (squarest grid with >= 2 rows, else chain), chain or grid")
            ->check(CLI::IsMember({"auto", "chain", "grid"}))
            ->capture_default_str();
        cmd->add_option("--rows", rows, "Grid rows");
        cmd->add_option("--cols", cols, "Grid columns");
        cmd->add_flag("--no-mask", no_mask, "Omit the final random X layer");
    }

    CircuitDistribution build() const {
        CircuitDistribution dist = default_distribution(n, depth);
        dist.final_not_mask_layer = !no_mask;
        if (topology == "chain") {
            dist.topology = Topology::chain();
        } else if (topology == "grid") {
            dist.topology = Topology::grid(rows, cols);
        }
        dist.validate();
        return dist;
    }
};

std::string format_output(const std::string &text, const std::string &format) {
    return format == "csv" ? key_values_to_csv(text) : text;
}

void add_format(CLI::App *cmd, std::string &format) {
    cmd->add_option("--format", format, "text or csv")->check(CLI::IsMember({"text", "csv"}))->capture_default_str();
}

}  // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Random circuit sampling, linear XEB and spoofing-reduction experiments", "xeblab"};
    app.require_subcommand(1);
    GlobalOptions global;
    app.add_option("--threads", global.threads, "Worker thread cap (falls back to XEBLAB_THREADS)");
    app.add_option("--max-qubits", global.max_qubits, "Largest circuit the simulator accepts")->capture_default_str();

    std::function<Verdict()> action;

    // gen
    auto *gen = app.add_subcommand("gen", "Sample a random circuit and write it as text");
    DistributionFlags gen_dist;
    uint64_t gen_seed = 0;
    std::string gen_out;
    gen_dist.add_to(gen);
    gen->add_option("--seed", gen_seed)->capture_default_str();
    gen->add_option("--out", gen_out, "Output path (stdout if omitted)");
    gen->callback([&] {
        action = [&] {
            emit(gen_out, serialize_circuit(sample_circuit(gen_dist.build(), gen_seed)), out);
            return Verdict{};
        };
    });

    // simulate
    auto *sim = app.add_subcommand("simulate", "Simulate a circuit file");
    std::string sim_circuit, sim_out, sim_amp;
    sim->add_option("--circuit", sim_circuit)->required();
    sim->add_option("--out", sim_out, "Write the output distribution as binary (u64 n, 2^n f64, little-endian)");
    sim->add_option("--amplitude", sim_amp, "Also report <z|C|0^n> for this bitstring");
    sim->callback([&] {
        action = [&] {
            SimulatorOptions opts{global.max_qubits};
            Circuit c = parse_circuit(read_file(sim_circuit));
            StateVector state = simulate(c, opts);
            OutputDistribution dist = distribution_of(state);
            std::string report = fmt::format("n={}\nnorm={:.17g}\np0={:.17g}\n", c.num_qubits(),
                                              state.norm_squared(), dist.probs[0]);
            if (!sim_amp.empty()) {
                if (sim_amp.size() != c.num_qubits()) {
                    throw std::invalid_argument("--amplitude length does not match the qubit count");
                }
                auto a = state.amplitude(parse_bitstring(sim_amp));
                report += fmt::format("amplitude_re={:.17g}\namplitude_im={:.17g}\nprobability={:.17g}\n", a.real(),
                                      a.imag(), std::norm(a));
            }
            if (!sim_out.empty()) {
                auto bytes = encode_distribution(dist);
                write_file(sim_out, std::string_view(bytes.data(), bytes.size()));
            }
            out << report;
            return Verdict{};
        };
    });

    // sample
    auto *smp = app.add_subcommand("sample", "Draw a sample set for a circuit");
    std::string smp_circuit, smp_kind = "ideal", smp_out;
    size_t smp_k = 0, smp_n = 0;
    double smp_fidelity = 1;
    uint64_t smp_seed = 0;
    bool smp_distinct = false;
    smp->add_option("--circuit", smp_circuit, "Circuit file (optional for the uniform sampler)");
    smp->add_option("--n", smp_n, "Qubit count for the uniform sampler without a circuit");
    smp->add_option("--sampler", smp_kind)
        ->check(CLI::IsMember({"ideal", "uniform", "depolarizing", "topk"}))
        ->capture_default_str();
    smp->add_option("--k", smp_k, "Number of samples")->required()->check(CLI::PositiveNumber);
    smp->add_option("--fidelity", smp_fidelity, "Ideal fraction for the depolarizing sampler")->capture_default_str();
    smp->add_option("--seed", smp_seed)->capture_default_str();
    smp->add_flag("--distinct", smp_distinct, "Reject duplicate strings");
    smp->add_option("--out", smp_out, "Output path (stdout if omitted)");
    smp->callback([&] {
        action = [&] {
            SimulatorOptions opts{global.max_qubits};
            SampleSet set;
            if (smp_kind == "uniform" && smp_circuit.empty()) {
                if (smp_n == 0) {
                    throw std::invalid_argument("uniform sampling needs --circuit or --n");
                }
                set = sample_uniform(smp_n, smp_k, smp_seed, smp_distinct);
            } else {
                if (smp_circuit.empty()) {
                    throw std::invalid_argument("--circuit is required for this sampler");
                }
                Circuit c = parse_circuit(read_file(smp_circuit));
                if (smp_kind == "uniform") {
                    set = sample_uniform(c.num_qubits(), smp_k, smp_seed, smp_distinct);
                } else if (smp_kind == "topk") {
                    set = sample_top_k(c, smp_k, opts);
                } else if (smp_kind == "ideal") {
                    set = sample_ideal(c, smp_k, smp_seed, smp_distinct, opts);
                } else {
                    set = sample_depolarizing(c, NoiseModel(smp_fidelity), smp_k, smp_seed, smp_distinct, opts);
                }
            }
            emit(smp_out, serialize_sample_set(set), out);
            return Verdict{};
        };
    });

    // xeb
    auto *xeb = app.add_subcommand("xeb", "Score samples with linear XEB and check XHOG; exit 1 on failure");
    std::string xeb_circuit, xeb_samples, xeb_format = "text", xeb_out;
    double xeb_b = 1.5;
    xeb->add_option("--circuit", xeb_circuit)->required();
    xeb->add_option("--samples", xeb_samples)->required();
    xeb->add_option("--b", xeb_b, "XHOG threshold b")->capture_default_str();
    xeb->add_option("--out", xeb_out, "Output path (stdout if omitted)");
    add_format(xeb, xeb_format);
    xeb->callback([&] {
        action = [&] {
            SimulatorOptions opts{global.max_qubits};
            Circuit c = parse_circuit(read_file(xeb_circuit));
            SampleSet s = parse_sample_set(read_file(xeb_samples));
            if (s.num_qubits != c.num_qubits()) {
                throw std::invalid_argument(
                    fmt::format("samples have {} qubits but the circuit has {}", s.num_qubits, c.num_qubits()));
            }
            XebReport r = check_xhog(c, s, xeb_b, opts);
            emit(xeb_out, xeb_format == "csv" ? report_csv_header() + format_report_csv(r) : format_report_text(r),
                 out);
            return Verdict{r.xhog_pass};
        };
    });

    // reduce
    auto *red = app.add_subcommand("reduce", "Benchmark an estimator of p_0 against the trivial 2^-n");
    DistributionFlags red_dist;
    std::string red_estimator = "trivial", red_out, red_format = "text", red_path_form = "shrunk";
    double red_b = 1.5, red_s = 1.0;
    size_t red_k = 0, red_trials = 1000, red_paths = 16;
    uint64_t red_seed = 0;
    red_dist.add_to(red);
    red->add_option("--estimator", red_estimator)
        ->check(CLI::IsMember({"trivial", "paths", "reduction-topk", "reduction-uniform", "exact"}))
        ->capture_default_str();
    red->add_option("--b", red_b, "XHOG threshold used by the reduction")->capture_default_str();
    red->add_option("--s", red_s, "Target success probability used to size k")->capture_default_str();
    red->add_option("--k", red_k, "Solver sample count (default: smallest k the bound allows)");
    red->add_option("--trials", red_trials)->capture_default_str()->check(CLI::Range(size_t{2}, size_t{1} << 40));
    red->add_option("--paths", red_paths, "Feynman paths per estimate")->capture_default_str()->check(CLI::PositiveNumber);
    red->add_option("--path-form", red_path_form, "shrunk, corrected, offset or raw")
        ->check(CLI::IsMember({"shrunk", "corrected", "offset", "raw"}))
        ->capture_default_str();
    red->add_option("--seed", red_seed)->capture_default_str();
    red->add_option("--out", red_out, "Per-trial CSV path");
    add_format(red, red_format);
    red->callback([&] {
        action = [&] {
            SimulatorOptions opts{global.max_qubits};
            CircuitDistribution dist = red_dist.build();
            Estimator estimator;
            size_t k = 0;
            if (red_estimator == "trivial") {
                estimator = make_trivial_estimator();
            } else if (red_estimator == "exact") {
                estimator = make_exact_estimator(opts);
            } else if (red_estimator == "paths") {
                PathProbability form = red_path_form == "raw"         ? PathProbability::kRaw
                                       : red_path_form == "corrected" ? PathProbability::kBiasCorrected
                                       : red_path_form == "offset"    ? PathProbability::kOffsetCorrected
                                                                      : PathProbability::kShrunk;
                estimator = make_path_estimator(red_paths, form);
            } else {
                k = red_k != 0 ? red_k : required_k(red_b, red_s);
                if (dist.num_qubits < 64 && k > (size_t{1} << dist.num_qubits)) {
                    throw std::invalid_argument(fmt::format("k = {} exceeds 2^n", k));
                }
                std::shared_ptr<const XhogSolver> solver;
                if (red_estimator == "reduction-topk") {
                    solver = std::make_shared<TopKSolver>(k, opts);
                } else {
                    solver = std::make_shared<UniformSolver>(k);
                }
                estimator = make_reduction_estimator(solver, red_b, opts);
            }
            auto start = std::chrono::steady_clock::now();
            MseBenchmark bench = run_mse_benchmark(dist, estimator, red_trials, red_seed, opts);
            std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

            std::string summary = fmt::format("estimator={}\n", red_estimator) + format_benchmark_summary(bench);
            if (k != 0) {
                double s = bench.success_rate;
                summary += fmt::format("k={}\nb={:.17g}\ntheorem_bound={:.17g}\n", k, red_b,
                                       static_cast<double>(k) * ((2 * s - 1) * red_b - 1) * (red_b - 1));
            }
            if (!red_out.empty()) {
                write_file(red_out, format_trials_csv(bench));
            }
            out << format_output(summary, red_format);
            err << fmt::format("wall_clock_seconds={:.3f}\n", elapsed.count());
            return Verdict{};
        };
    });

    // analyze
    auto *ana = app.add_subcommand("analyze", "Statistical checks");
    ana->require_subcommand(1);
    std::string ana_format = "text";
    uint64_t ana_seed = 0;

    auto *pt = ana->add_subcommand("pt", "Porter-Thomas fit of pooled output probabilities; exit 1 on failure");
    DistributionFlags pt_dist;
    size_t pt_circuits = 200;
    double pt_threshold = 0.01;
    std::string pt_dump;
    pt_dist.add_to(pt);
    pt->add_option("--circuits", pt_circuits)->capture_default_str()->check(CLI::PositiveNumber);
    pt->add_option("--threshold", pt_threshold, "KS distance below which the fit passes")->capture_default_str();
    pt->add_option("--dump", pt_dump, "Write the pooled values 2^n P(z), one per line");
    pt->add_option("--seed", ana_seed)->capture_default_str();
    add_format(pt, ana_format);
    pt->callback([&] {
        action = [&] {
            PorterThomasOptions opts;
            opts.threshold = pt_threshold;
            opts.simulator.max_qubits = global.max_qubits;
            std::vector<double> pooled;
            if (!pt_dump.empty()) {
                opts.pooled_out = &pooled;
            }
            FitReport r = porter_thomas_fit(pt_dist.build(), pt_circuits, ana_seed, opts);
            if (!pt_dump.empty()) {
                std::string text;
                for (double v : pooled) {
                    text += fmt::format("{:.17g}\n", v);
                }
                write_file(pt_dump, text);
            }
            out << format_output(format_fit_report(r), ana_format);
            return Verdict{r.pass};
        };
    });

    auto *mom = ana->add_subcommand("moments", "Mean and variance of Y = P(z) under depolarizing samples");
    DistributionFlags mom_dist;
    double mom_fidelity = 1;
    size_t mom_circuits = 200, mom_samples = 1000;
    mom_dist.add_to(mom);
    mom->add_option("--fidelity", mom_fidelity)->capture_default_str();
    mom->add_option("--circuits", mom_circuits)->capture_default_str();
    mom->add_option("--samples", mom_samples, "Samples per circuit")->capture_default_str();
    mom->add_option("--seed", ana_seed)->capture_default_str();
    add_format(mom, ana_format);
    mom->callback([&] {
        action = [&] {
            MomentsReport r = xeb_moment_check(mom_dist.build(), mom_fidelity, mom_circuits, mom_samples, ana_seed,
                                               SimulatorOptions{global.max_qubits});
            out << format_output(format_moments_report(r), ana_format);
            return Verdict{};
        };
    });

    auto *kl = ana->add_subcommand("kl", "Single-sample KL divergence and the Pinsker bound for k samples");
    double kl_b = 1.1;
    size_t kl_k = 1;
    kl->add_option("--b", kl_b)->required();
    kl->add_option("--k", kl_k)->capture_default_str();
    add_format(kl, ana_format);
    kl->callback([&] {
        action = [&] {
            out << format_output(format_divergence_report(kl_uniform_vs_xhog(kl_b, kl_k)), ana_format);
            return Verdict{};
        };
    });

    auto *dis = ana->add_subcommand("distinguish", "Likelihood-ratio advantage between uniform and XHOG-level samples");
    double dis_b = 1.5;
    size_t dis_k = 100, dis_trials = 2000, dis_n = 8, dis_depth = 20;
    dis->add_option("--b", dis_b)->capture_default_str();
    dis->add_option("--k", dis_k)->capture_default_str();
    dis->add_option("--trials", dis_trials)->capture_default_str();
    dis->add_option("--n", dis_n)->capture_default_str()->check(CLI::Range(size_t{1}, kMaxCircuitQubits));
    dis->add_option("--depth", dis_depth)->capture_default_str();
    dis->add_option("--seed", ana_seed)->capture_default_str();
    add_format(dis, ana_format);
    dis->callback([&] {
        action = [&] {
            DistinguishabilityReport r = empirical_distinguishability(
                dis_b, dis_k, dis_trials, default_distribution(dis_n, dis_depth), ana_seed,
                SimulatorOptions{global.max_qubits});
            out << format_output(format_distinguishability_report(r), ana_format);
            return Verdict{};
        };
    });

    auto *rk = ana->add_subcommand("required-k", "Sample count needed by the reduction or the Chebyshev argument");
    double rk_b = 1.5, rk_s = 1.0;
    std::string rk_convention = "theorem";
    rk->add_option("--b", rk_b)->required();
    rk->add_option("--s", rk_s)->capture_default_str();
    bool rk_appendix = false;
    rk->add_option("--convention", rk_convention, "theorem: 1/(((2s-1)b-1)(b-1)); chebyshev: 4(b-1)^-2")
        ->check(CLI::IsMember({"theorem", "chebyshev"}))
        ->capture_default_str();
    rk->add_flag("--appendix", rk_appendix, "Same as --convention chebyshev");
    add_format(rk, ana_format);
    rk->callback([&] {
        action = [&] {
            std::string text;
            if (rk_appendix || rk_convention == "chebyshev") {
                text = fmt::format("b={:.17g}\nconvention=chebyshev\nk={}\n", rk_b, required_k_chebyshev(rk_b));
            } else {
                text = fmt::format("b={:.17g}\ns={:.17g}\nconvention=theorem\nk={}\n", rk_b, rk_s,
                                   required_k(rk_b, rk_s));
            }
            out << format_output(text, ana_format);
            return Verdict{};
        };
    });

    auto *cb = ana->add_subcommand("chebyshev", "Chebyshev lower bound on the XHOG success probability");
    double cb_b = 1.1, cb_mean = 1.2;
    uint64_t cb_k = 400;
    cb->add_option("--b", cb_b)->required();
    cb->add_option("--k", cb_k)->required();
    cb->add_option("--fidelity-mean", cb_mean, "E[Y] 2^n")->required();
    add_format(cb, ana_format);
    cb->callback([&] {
        action = [&] {
            std::string text = fmt::format("b={:.17g}\nk={}\nfidelity_mean={:.17g}\nsuccess_bound={:.17g}\n"
                                           "success_bound_from_variance={:.17g}\n",
                                           cb_b, cb_k, cb_mean, chebyshev_success_bound(cb_b, cb_k, cb_mean),
                                           chebyshev_success_bound_from_variance(cb_b, cb_k, cb_mean));
            out << format_output(text, ana_format);
            return Verdict{};
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        set_thread_limit(global.threads);
        if (!action) {
            err << "no subcommand selected\n";
            return kExitUsage;
        }
        return action().pass ? kExitOk : kExitTestFailed;
    } catch (const IoError &e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ResourceError &e) {
        err << "error: " << e.what() << "\n";
        return kExitResource;
    } catch (const std::bad_alloc &) {
        err << "error: out of memory\n";
        return kExitResource;
    } catch (const ParseError &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::logic_error &e) {
        // invalid_argument, domain_error and ConfigError.
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace xeblab
