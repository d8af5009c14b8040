// Copyright 2026 The tqec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tqec/montecarlo.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iterator>
#include <map>
#include <stdexcept>
#include <thread>

namespace tqec {

std::string_view lattice_mode_name(LatticeMode mode) {
    return mode == LatticeMode::Manhattan ? "manhattan" : "autotuned";
}

LatticeMode parse_lattice_mode(std::string_view name) {
    if (name == "manhattan") return LatticeMode::Manhattan;
    if (name == "autotuned" || name == "autotune") return LatticeMode::Autotuned;
    throw std::invalid_argument("unknown lattice mode '" + std::string(name) + "'");
}

Interval wilson_interval(long k, long n, double z) {
    if (n <= 0) return {0, 1};
    const double nn = static_cast<double>(n);
    const double phat = static_cast<double>(k) / nn;
    const double z2 = z * z;
    const double denom = 1 + z2 / nn;
    const double centre = (phat + z2 / (2 * nn)) / denom;
    const double half = z * std::sqrt(phat * (1 - phat) / nn + z2 / (4 * nn * nn)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// All-pairs tables up to this size stay below about 60 MB.
constexpr int kCachedNodes = 2500;

void check_rates(const ModelLibrary &models, double p) {
    if (p < 0) throw std::invalid_argument("p must be non-negative");
    for (int k = 0; k < kNumGateKinds; ++k) {
        const auto *m = models.find(static_cast<GateKind>(k));
        if (m && p * m->x > 1) {
            throw std::invalid_argument("p * x = " + std::to_string(p * m->x) + " exceeds 1 for gate " +
                                        std::string(gate_name(static_cast<GateKind>(k))));
        }
    }
}

}  // namespace

double per_round_rate(double block_fraction, int rounds) {
    if (block_fraction >= 0.5) return 0.5;
    return 0.5 * (1 - std::pow(1 - 2 * block_fraction, 1.0 / rounds));
}

Rng block_rng(std::uint64_t seed, int stream, long block) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ static_cast<std::uint64_t>(stream));
    h = splitmix64(h ^ static_cast<std::uint64_t>(block));
    return Rng(h);
}

BlockExperiment::BlockExperiment(const RunConfig &config, const ModelLibrary &models, Basis basis)
    : circuit_(build_code(config.code, config.d, config.block_rounds(), basis)), index_(circuit_), models_(&models) {
    if (circuit_.observables.empty()) throw std::invalid_argument("circuit has no observable");
    kind_ = circuit_.observables[0].kind;
    if (config.lattice == LatticeMode::Manhattan) {
        lattice_ = build_manhattan(circuit_);
    } else {
        const double lp = config.lattice_p > 0 ? config.lattice_p : config.p;
        lattice_ = autotuned_lattice(circuit_, models, lp > 0 ? lp : 1e-3);
    }
    decoder_ = std::make_unique<MatchingDecoder>(lattice_, kind_);
    if (decoder_->num_nodes() <= kCachedNodes) decoder_->precompute();
}

void BlockExperiment::events_from_flips(std::span<const std::uint8_t> flips, std::vector<int> &events,
                                        bool &observable_flip) const {
    events.clear();
    const auto parities = set_parities(index_, flips);
    for (int s = 0; s < static_cast<int>(parities.size()); ++s) {
        if (parities[s] && circuit_.sets[s].kind == kind_) events.push_back(circuit_.sets[s].id);
    }
    observable_flip = observable_parities(index_, flips)[observable_] != 0;
}

bool BlockExperiment::sample_block(FrameSimulator &sim, double p, Rng &rng, long *num_events) const {
    std::vector<std::uint8_t> flips;
    sim.sample(p, rng, flips);
    std::vector<int> events;
    bool flip = false;
    events_from_flips(flips, events, flip);
    if (num_events) *num_events += static_cast<long>(events.size());
    return logical_failure(decoder_->decode(events), flip);
}

namespace {

struct BatchTotals {
    long failures = 0;
    long events = 0;
};

BatchTotals run_batch(const BlockExperiment &exp, const ModelLibrary &models, double p, std::uint64_t seed, int stream,
                      long first_block, int count, int threads) {
    std::vector<char> failed(count, 0);
    std::vector<long> events(count, 0);
    auto work = [&](int worker, int workers) {
        FrameSimulator sim(exp.circuit(), exp.index(), models);
        for (int b = worker; b < count; b += workers) {
            Rng rng = block_rng(seed, stream, first_block + b);
            failed[b] = exp.sample_block(sim, p, rng, &events[b]);
        }
    };
    if (threads <= 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w) pool.emplace_back(work, w, threads);
        for (auto &t : pool) t.join();
    }
    BatchTotals out;
    for (int b = 0; b < count; ++b) {
        out.failures += failed[b];
        out.events += events[b];
    }
    return out;
}

}  // namespace

RunStats run(const RunConfig &config) {
    if (config.max_failures < 1) throw std::invalid_argument("max_failures must be at least 1");
    if (config.block_rounds() < std::max(2, config.d)) {
        throw std::invalid_argument("blocks need at least max(2, d) rounds, got " + std::to_string(config.block_rounds()));
    }
    const auto start = std::chrono::steady_clock::now();
    const ModelLibrary models = ModelLibrary::named(config.models);
    check_rates(models, config.p);

    BlockExperiment memory_z(config, models, Basis::Z);
    std::unique_ptr<BlockExperiment> memory_x;
    if (config.measure_z && config.code == "surface") memory_x = std::make_unique<BlockExperiment>(config, models, Basis::X);

    RunStats stats;
    stats.code = config.code;
    stats.d = config.d;
    stats.lattice = config.lattice;
    stats.p = config.p;
    stats.rounds_per_block = config.block_rounds();
    const int batch = std::max(1, config.batch_blocks);
    while (true) {
        BatchTotals z = run_batch(memory_z, models, config.p, config.seed, 2 * config.stream, stats.blocks, batch,
                                  config.threads);
        stats.failures_X += z.failures;
        stats.events += z.events;
        if (memory_x) {
            BatchTotals x = run_batch(*memory_x, models, config.p, config.seed, 2 * config.stream + 1, stats.blocks,
                                      batch, config.threads);
            stats.failures_Z += x.failures;
            stats.events += x.events;
        }
        stats.blocks += batch;
        stats.rounds = stats.blocks * stats.rounds_per_block;
        if (stats.failures_X >= config.max_failures) break;
        if (config.max_rounds > 0 && stats.rounds >= config.max_rounds) break;
        if (config.max_rounds == 0 && config.p == 0) break;
    }
    const int t = stats.rounds_per_block;
    stats.rate = per_round_rate(static_cast<double>(stats.failures_X) / static_cast<double>(stats.blocks), t);
    const Interval ci = wilson_interval(stats.failures_X, stats.blocks);
    stats.ci_lo = per_round_rate(ci.lo, t);
    stats.ci_hi = per_round_rate(ci.hi, t);
    stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return stats;
}

std::vector<RunStats> run_sweep(RunConfig config, const std::vector<double> &ps) {
    std::vector<RunStats> out;
    for (std::size_t k = 0; k < ps.size(); ++k) {
        config.p = ps[k];
        config.stream = static_cast<int>(k);
        out.push_back(run(config));
    }
    return out;
}

InjectReport inject_exhaustive(const InjectConfig &config) {
    if (config.k != 1 && config.k != 2) throw std::invalid_argument("k must be 1 or 2");
    const auto start = std::chrono::steady_clock::now();
    const ModelLibrary models = ModelLibrary::named(config.models);
    RunConfig rc;
    rc.code = config.code;
    rc.d = config.d;
    rc.rounds_per_block = config.rounds > 0 ? config.rounds : 2 * config.d;
    rc.lattice = config.lattice;
    rc.models = config.models;
    rc.lattice_p = config.lattice_p;
    BlockExperiment exp(rc, models, config.basis);
    exp.decoder().precompute();
    const Circuit &circuit = exp.circuit();

    struct Signature {
        long count = 0;
        ForcedFault example;
    };
    std::map<std::pair<std::vector<int>, bool>, Signature> signatures;
    InjectReport report;
    FrameSimulator sim(circuit, exp.index(), models);
    std::vector<std::uint8_t> flips;
    std::vector<int> events;
    for (int s = 0; s < static_cast<int>(circuit.steps.size()); ++s) {
        for (int g = 0; g < static_cast<int>(circuit.steps[s].size()); ++g) {
            const auto *model = models.find(circuit.steps[s][g].kind);
            if (!model || circuit.steps[s][g].kind == GateKind::Dead) continue;
            for (int e = 0; e < static_cast<int>(model->size()); ++e) {
                const ForcedFault fault{s, g, e};
                sim.run_forced(std::span<const ForcedFault>(&fault, 1), flips);
                bool flip = false;
                exp.events_from_flips(flips, events, flip);
                auto &sig = signatures[{events, flip}];
                if (sig.count++ == 0) sig.example = fault;
                ++report.fault_entries;
            }
        }
    }
    report.unique_signatures = static_cast<long>(signatures.size());
    const double u = static_cast<double>(signatures.size());
    const double planned = config.k == 1 ? u : u + u * (u - 1) / 2;
    if (planned > static_cast<double>(config.max_combinations)) {
        const double raw = static_cast<double>(report.fault_entries);
        char msg[256];
        std::snprintf(msg, sizeof msg,
                      "%.3g distinct combinations (%.3g raw fault pairs) exceed the limit of %ld; reduce d or rounds",
                      planned, raw * (raw - 1) / 2, config.max_combinations);
        throw CombinatorialLimit(msg, planned);
    }

    auto fails = [&](const std::vector<int> &ev, bool flip) {
        if (ev.empty()) return flip;
        return logical_failure(exp.decoder().decode(ev), flip);
    };
    auto record = [&](std::vector<ForcedFault> faults, const std::vector<int> &ev, long multiplicity) {
        ++report.failing_signatures;
        report.failing_combinations += multiplicity;
        if (report.examples.size() < config.max_examples) report.examples.push_back({std::move(faults), ev});
    };

    std::vector<const std::pair<const std::pair<std::vector<int>, bool>, Signature> *> list;
    for (const auto &entry : signatures) list.push_back(&entry);
    for (const auto *entry : list) {
        ++report.combinations;
        if (fails(entry->first.first, entry->first.second)) {
            record({entry->second.example}, entry->first.first, entry->second.count);
        }
    }
    if (config.k == 2) {
        std::vector<int> merged;
        for (std::size_t x = 0; x < list.size(); ++x) {
            for (std::size_t y = x + 1; y < list.size(); ++y) {
                const auto &[ex, fx] = list[x]->first;
                const auto &[ey, fy] = list[y]->first;
                merged.clear();
                std::set_symmetric_difference(ex.begin(), ex.end(), ey.begin(), ey.end(), std::back_inserter(merged));
                ++report.combinations;
                if (fails(merged, fx != fy)) {
                    std::vector<ForcedFault> pair{list[x]->second.example, list[y]->second.example};
                    std::sort(pair.begin(), pair.end());
                    record(std::move(pair), merged, list[x]->second.count * list[y]->second.count);
                }
            }
        }
    }
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

double loglog_slope(const std::vector<double> &ps, const std::vector<double> &rates) {
    if (ps.size() != rates.size() || ps.size() < 2) throw std::invalid_argument("need at least two (p, rate) points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(ps.size());
    for (std::size_t k = 0; k < ps.size(); ++k) {
        if (ps[k] <= 0 || rates[k] <= 0) throw std::invalid_argument("log-log fit needs positive p and rate");
        const double x = std::log(ps[k]);
        const double y = std::log(rates[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

struct Crossing {
    CrossingStatus status;
    double p;
};

Crossing find_crossing(const std::vector<double> &ps, const std::vector<double> &small_rate,
                       const std::vector<double> &large_rate) {
    std::vector<double> diff(ps.size());
    for (std::size_t k = 0; k < ps.size(); ++k) diff[k] = std::log(large_rate[k]) - std::log(small_rate[k]);
    for (std::size_t k = 0; k + 1 < ps.size(); ++k) {
        if ((diff[k] < 0) != (diff[k + 1] < 0)) {
            const double x0 = std::log(ps[k]);
            const double x1 = std::log(ps[k + 1]);
            const double x = x0 + (0 - diff[k]) * (x1 - x0) / (diff[k + 1] - diff[k]);
            return {CrossingStatus::Crossing, std::exp(x)};
        }
    }
    return {diff[0] < 0 ? CrossingStatus::AllBelow : CrossingStatus::AllAbove, 0};
}

double smoothed_rate(long failures, long blocks, int rounds_per_block) {
    const double k = failures > 0 ? static_cast<double>(failures) : 0.5;
    return per_round_rate(k / static_cast<double>(blocks), rounds_per_block);
}

}  // namespace

ThresholdEstimate estimate_threshold(const std::vector<RunStats> &small_d, const std::vector<RunStats> &large_d,
                                     int bootstrap, std::uint64_t seed) {
    if (small_d.size() != large_d.size() || small_d.size() < 2) {
        throw std::invalid_argument("threshold estimate needs two curves over the same >= 2 values of p");
    }
    bool identical = true;
    std::vector<double> ps;
    for (std::size_t k = 0; k < small_d.size(); ++k) {
        const auto &a = small_d[k];
        const auto &b = large_d[k];
        if (std::abs(a.p - b.p) > 1e-12 * std::max(a.p, b.p)) throw std::invalid_argument("curves use different p values");
        if (a.blocks <= 0 || b.blocks <= 0) throw std::invalid_argument("empty sweep point");
        if (k > 0 && a.p <= ps.back()) throw std::invalid_argument("p values must increase");
        ps.push_back(a.p);
        identical = identical && a.d == b.d && a.failures_X == b.failures_X && a.blocks == b.blocks;
    }
    if (identical) throw std::invalid_argument("degenerate input: both curves are the same dataset");

    auto rates_of = [](const std::vector<RunStats> &curve) {
        std::vector<double> r;
        for (const auto &s : curve) r.push_back(smoothed_rate(s.failures_X, s.blocks, s.rounds_per_block));
        return r;
    };
    const Crossing c = find_crossing(ps, rates_of(small_d), rates_of(large_d));
    ThresholdEstimate out;
    out.status = c.status;
    out.p_cross = c.p;
    if (c.status != CrossingStatus::Crossing) return out;

    Rng rng(splitmix64(seed));
    std::vector<double> hits;
    auto resample = [&](const std::vector<RunStats> &curve) {
        std::vector<double> r;
        for (const auto &s : curve) {
            const double q = static_cast<double>(s.failures_X) / static_cast<double>(s.blocks);
            std::binomial_distribution<long> draw(s.blocks, std::clamp(q, 0.0, 1.0));
            r.push_back(smoothed_rate(draw(rng), s.blocks, s.rounds_per_block));
        }
        return r;
    };
    for (int b = 0; b < bootstrap; ++b) {
        const auto rs = resample(small_d);
        const auto rl = resample(large_d);
        const Crossing bc = find_crossing(ps, rs, rl);
        if (bc.status == CrossingStatus::Crossing) hits.push_back(bc.p);
    }
    out.bootstrap_hits = static_cast<int>(hits.size());
    if (hits.empty()) {
        out.ci_lo = out.ci_hi = c.p;
        return out;
    }
    std::sort(hits.begin(), hits.end());
    auto quantile = [&](double q) {
        const std::size_t at = static_cast<std::size_t>(std::floor(q * (hits.size() - 1)));
        return hits[at];
    };
    out.ci_lo = quantile(0.025);
    out.ci_hi = quantile(0.975);
    return out;
}

void write_csv_header(std::ostream &out) {
    out << "code,d,lattice,p,rounds,failures_X,failures_Z,rate,ci_lo,ci_hi,seconds\n";
}

void write_csv_row(std::ostream &out, const RunStats &s) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "%s,%d,%s,%.6g,%ld,%ld,%ld,%.6e,%.6e,%.6e,%.3f\n", s.code.c_str(), s.d,
                  std::string(lattice_mode_name(s.lattice)).c_str(), s.p, s.rounds, s.failures_X, s.failures_Z, s.rate,
                  s.ci_lo, s.ci_hi, s.seconds);
    out << buf;
}

}  // namespace tqec
