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

#include "tqec/lattice.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <tuple>

#include "json.hpp"
#include "tqec/analysis.h"

namespace tqec {

double line_weight(double p_stick) {
    return -std::log(std::clamp(p_stick, kMinStickProbability, kMaxStickProbability));
}

const Dot *Lattice::dot(int id) const {
    if (id < 0 || id >= static_cast<int>(dots.size()) || !dots[id].present) return nullptr;
    return &dots[id];
}

int Lattice::num_layers() const {
    int n = 0;
    for (const auto &d : dots) {
        if (d.present) n = std::max(n, d.coord.t + 1);
    }
    return n;
}

void Lattice::sort_lines() {
    std::sort(lines.begin(), lines.end(),
              [](const Line &x, const Line &y) { return std::tie(x.a, x.b, x.boundary) < std::tie(y.a, y.b, y.boundary); });
}

Lattice nest_to_lattice(const Nest &nest) {
    Lattice lat;
    lat.boundaries = nest.boundaries();
    int max_id = -1;
    for (const auto &[id, b] : nest.balls()) max_id = std::max(max_id, id);
    lat.dots.resize(max_id + 1);
    for (int k = 0; k <= max_id; ++k) lat.dots[k].id = k;
    for (const auto &[id, b] : nest.balls()) lat.dots[id] = {id, b.kind, b.coord, true};
    for (const Stick *s : nest.sticks()) {
        lat.lines.push_back({s->kind, s->a, s->b, s->boundary, line_weight(s->p_stick), s->p_stick, s->flip});
    }
    return lat;
}

Lattice build_manhattan(const Circuit &circuit) {
    Lattice lat;
    lat.boundaries = circuit.boundaries;
    int max_id = -1;
    for (const auto &s : circuit.sets) max_id = std::max(max_id, s.id);
    lat.dots.resize(max_id + 1);
    for (int k = 0; k <= max_id; ++k) lat.dots[k].id = k;
    std::map<std::pair<int, Coord3>, int> at;
    for (const auto &s : circuit.sets) {
        lat.dots[s.id] = {s.id, s.kind, s.coord, true};
        at[{static_cast<int>(s.kind), s.coord}] = s.id;
    }
    // Cut links flip the lines they name, in every layer.
    std::set<std::tuple<int, int, int, int, int, int>> cut;
    for (const auto &c : circuit.logical_cut) {
        const int k = static_cast<int>(c.kind);
        if (c.boundary >= 0) {
            cut.insert({k, c.i, c.j, -1, -1, c.boundary});
        } else {
            cut.insert({k, c.i, c.j, c.other_i, c.other_j, -1});
            cut.insert({k, c.other_i, c.other_j, c.i, c.j, -1});
        }
    }
    const Coord3 sp = circuit.spacing;
    for (const auto &s : circuit.sets) {
        const int k = static_cast<int>(s.kind);
        const Coord3 c = s.coord;
        for (Coord3 n : {Coord3{c.i + sp.i, c.j, c.t}, Coord3{c.i, c.j + sp.j, c.t}, Coord3{c.i, c.j, c.t + sp.t}}) {
            auto it = at.find({k, n});
            if (it == at.end()) continue;
            bool flip = n.t == c.t && cut.count({k, c.i, c.j, n.i, n.j, -1});
            lat.lines.push_back({s.kind, std::min(s.id, it->second), std::max(s.id, it->second), -1, 1.0, std::exp(-1.0), flip});
        }
        if (s.boundary) {
            bool flip = cut.count({k, c.i, c.j, -1, -1, *s.boundary});
            lat.lines.push_back({s.kind, s.id, -1, *s.boundary, 1.0, std::exp(-1.0), flip});
        }
    }
    lat.sort_lines();
    return lat;
}

Lattice build_manhattan(std::string_view code, int d, int rounds, Basis basis) {
    return build_manhattan(build_code(code, d, rounds, basis));
}

void export_lattice(const Lattice &lattice, std::ostream &out) {
    using nlohmann::json;
    json doc;
    doc["format"] = "tqec-lattice";
    doc["version"] = 1;
    json boundaries = json::array();
    for (const auto &b : lattice.boundaries) {
        boundaries.push_back({{"id", b.id},
                              {"kind", kind_name(b.kind)},
                              {"nature", b.nature == BoundaryNature::Spatial ? "spatial" : "temporal"},
                              {"name", b.name}});
    }
    doc["boundaries"] = boundaries;
    json dots = json::array();
    for (const auto &d : lattice.dots) {
        if (!d.present) continue;
        dots.push_back({{"id", d.id}, {"kind", kind_name(d.kind)}, {"i", d.coord.i}, {"j", d.coord.j}, {"t", d.coord.t}});
    }
    doc["dots"] = dots;
    json lines = json::array();
    for (const auto &l : lattice.lines) {
        json j{{"kind", kind_name(l.kind)}, {"a", l.a}, {"w", l.weight}, {"flip", l.flip}};
        if (l.to_boundary()) {
            j["boundary"] = l.boundary;
        } else {
            j["b"] = l.b;
        }
        lines.push_back(std::move(j));
    }
    doc["lines"] = lines;
    out << doc.dump(1) << "\n";
}

void export_recipe(const Recipe &recipe, std::ostream &out) {
    using nlohmann::json;
    json doc;
    doc["format"] = "tqec-recipe";
    doc["version"] = 1;
    doc["status"] = recipe.status == RecipeStatus::Converged ? "converged" : "finite";
    doc["source_layers"] = recipe.source_layers;
    doc["min_layers"] = recipe.min_layers();
    json offsets = json::array();
    for (const auto &o : recipe.offsets) {
        json j{{"weight", o.weight}, {"p", o.p}, {"flip", o.flip}};
        if (o.boundary >= 0) {
            j["boundary"] = o.boundary;
        } else {
            j["di"] = o.di;
            j["dj"] = o.dj;
            j["dt"] = o.dt;
        }
        offsets.push_back(j);
    }
    doc["offsets"] = offsets;
    doc["blocks"] = recipe.blocks;
    json layers = json::array();
    for (const auto &layer : recipe.layers) {
        json dots = json::array();
        for (const auto &d : layer) {
            dots.push_back({{"kind", kind_name(d.kind)}, {"i", d.i}, {"j", d.j}, {"block", d.block}});
        }
        layers.push_back(dots);
    }
    doc["layers"] = layers;
    doc["head"] = recipe.head;
    doc["bulk"] = recipe.bulk;
    doc["tail"] = recipe.tail;
    out << doc.dump(1) << '\n';
}

int Recipe::min_layers() const {
    if (status == RecipeStatus::Finite) return static_cast<int>(head.size());
    return static_cast<int>(head.size() + tail.size()) + 1;
}

int Recipe::layer_at(int t, int total_layers) const {
    if (status == RecipeStatus::Finite) {
        if (total_layers != static_cast<int>(head.size()) || t < 0 || t >= total_layers) {
            throw std::out_of_range("layer " + std::to_string(t) + " outside finite recipe of " +
                                    std::to_string(head.size()) + " layers");
        }
        return head[t];
    }
    if (total_layers < min_layers() || t < 0 || t >= total_layers) {
        throw std::out_of_range("layer " + std::to_string(t) + " of " + std::to_string(total_layers) +
                                " not producible; recipe needs at least " + std::to_string(min_layers()) + " layers");
    }
    const int h = static_cast<int>(head.size());
    const int tail_start = total_layers - static_cast<int>(tail.size());
    if (t < h) return head[t];
    if (t >= tail_start) return tail[t - tail_start];
    return bulk;
}

namespace {

bool same_weight(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

class OffsetTable {
   public:
    OffsetTable(std::vector<Offset> &offsets, double tol) : offsets_(offsets), tol_(tol) {}

    int intern(const Offset &o) {
        auto &candidates = by_geometry_[{o.di, o.dj, o.dt, o.boundary, o.flip}];
        for (int id : candidates) {
            if (same_weight(offsets_[id].weight, o.weight, tol_)) return id;
        }
        offsets_.push_back(o);
        candidates.push_back(static_cast<int>(offsets_.size()) - 1);
        return candidates.back();
    }

   private:
    std::vector<Offset> &offsets_;
    double tol_;
    std::map<std::tuple<int, int, int, int, bool>, std::vector<int>> by_geometry_;
};

template <typename T>
int intern_value(std::vector<T> &store, std::map<T, int> &index, T value) {
    auto [it, created] = index.try_emplace(value, static_cast<int>(store.size()));
    if (created) store.push_back(std::move(value));
    return it->second;
}

}  // namespace

Recipe compile_recipe(const Lattice &lattice, double weight_tolerance) {
    Recipe r;
    r.boundaries = lattice.boundaries;
    r.weight_tolerance = weight_tolerance;
    OffsetTable offsets(r.offsets, weight_tolerance);
    std::map<std::vector<int>, int> block_index;
    std::map<std::vector<LayerDot>, int> layer_index;

    std::vector<std::vector<int>> owned(lattice.dots.size());
    for (const auto &line : lattice.lines) {
        const Dot &a = lattice.dots.at(line.a);
        Offset o;
        o.weight = line.weight;
        o.p = line.p;
        o.flip = line.flip;
        int owner = line.a;
        if (line.to_boundary()) {
            o.boundary = line.boundary;
        } else {
            const Dot &b = lattice.dots.at(line.b);
            const bool a_owns = std::tie(a.coord.t, a.coord.i, a.coord.j) > std::tie(b.coord.t, b.coord.i, b.coord.j);
            const Dot &own = a_owns ? a : b;
            const Dot &other = a_owns ? b : a;
            owner = own.id;
            o.di = other.coord.i - own.coord.i;
            o.dj = other.coord.j - own.coord.j;
            o.dt = other.coord.t - own.coord.t;
        }
        owned[owner].push_back(offsets.intern(o));
    }

    const int num_layers = lattice.num_layers();
    std::vector<std::vector<LayerDot>> layer_dots(num_layers);
    for (const auto &d : lattice.dots) {
        if (!d.present) continue;
        std::vector<int> block = owned[d.id];
        std::sort(block.begin(), block.end());
        const int b = intern_value(r.blocks, block_index, std::move(block));
        layer_dots[d.coord.t].push_back({d.kind, d.coord.i, d.coord.j, b});
    }
    std::vector<int> seq;
    for (auto &dots : layer_dots) {
        std::sort(dots.begin(), dots.end());
        seq.push_back(intern_value(r.layers, layer_index, std::move(dots)));
    }
    r.source_layers = num_layers;

    int repeat = -1;
    for (int t = 1; t < num_layers; ++t) {
        if (seq[t] == seq[t - 1]) {
            repeat = t - 1;
            break;
        }
    }
    bool converged = repeat >= 0;
    int last = -1;
    if (converged) {
        for (int t = num_layers; t-- > 0;) {
            if (seq[t] == seq[repeat]) {
                last = t;
                break;
            }
        }
        for (int t = repeat; t <= last; ++t) converged = converged && seq[t] == seq[repeat];
    }
    if (converged) {
        r.status = RecipeStatus::Converged;
        r.head.assign(seq.begin(), seq.begin() + repeat);
        r.bulk = seq[repeat];
        r.tail.assign(seq.begin() + last + 1, seq.end());
    } else {
        r.status = RecipeStatus::Finite;
        r.head = seq;
    }
    return r;
}

Recipe bootup(const Circuit &circuit, const ModelLibrary &models, double p, BootupOptions options) {
    AnalysisResult analysis = analyze(circuit, models, p);
    Recipe r = compile_recipe(nest_to_lattice(analysis.nest));
    if (options.require_convergence && r.status != RecipeStatus::Converged) {
        throw std::runtime_error("recipe for " + circuit.name + " did not converge within " +
                                 std::to_string(circuit.rounds) + " rounds");
    }
    return r;
}

std::vector<Line> generate_layer(const Recipe &recipe, int t, const Circuit &target, const CircuitIndex &index) {
    (void)target;
    const auto &layer = recipe.layers.at(recipe.layer_at(t, index.num_layers()));
    std::vector<Line> lines;
    for (const auto &ld : layer) {
        auto self = index.find_set(ld.kind, {ld.i, ld.j, t});
        if (!self) {
            throw std::runtime_error("no " + std::string(kind_name(ld.kind)) + " set at (" + std::to_string(ld.i) + ", " +
                                     std::to_string(ld.j) + ", " + std::to_string(t) + ")");
        }
        for (int id : recipe.blocks[ld.block]) {
            const Offset &o = recipe.offsets[id];
            if (o.boundary >= 0) {
                lines.push_back({ld.kind, *self, -1, o.boundary, o.weight, o.p, o.flip});
                continue;
            }
            auto other = index.find_set(ld.kind, {ld.i + o.di, ld.j + o.dj, t + o.dt});
            if (!other) throw std::runtime_error("recipe offset leaves the target circuit at layer " + std::to_string(t));
            lines.push_back({ld.kind, std::min(*self, *other), std::max(*self, *other), -1, o.weight, o.p, o.flip});
        }
    }
    return lines;
}

Lattice generate_lattice(const Recipe &recipe, const Circuit &target) {
    const CircuitIndex index(target);
    Lattice lat;
    lat.boundaries = recipe.boundaries;
    int max_id = -1;
    for (const auto &s : target.sets) max_id = std::max(max_id, s.id);
    lat.dots.resize(max_id + 1);
    for (int k = 0; k <= max_id; ++k) lat.dots[k].id = k;
    for (const auto &s : target.sets) lat.dots[s.id] = {s.id, s.kind, s.coord, true};
    for (int t = 0; t < index.num_layers(); ++t) {
        auto lines = generate_layer(recipe, t, target, index);
        lat.lines.insert(lat.lines.end(), lines.begin(), lines.end());
    }
    lat.sort_lines();
    return lat;
}

Lattice autotuned_lattice(const Circuit &circuit, const ModelLibrary &models, double p, int probe_rounds) {
    const bool builtin = circuit.name == "surface" || circuit.name == "cluster";
    if (!builtin || circuit.rounds <= probe_rounds) return nest_to_lattice(analyze(circuit, models, p).nest);
    Basis basis = Basis::Z;
    if (!circuit.observables.empty() && circuit.observables.front().kind == Kind::Dual) basis = Basis::X;
    const Circuit probe = build_code(circuit.name, circuit.distance, probe_rounds, basis);
    const Recipe recipe = bootup(probe, models, p);
    if (recipe.status != RecipeStatus::Converged) return nest_to_lattice(analyze(circuit, models, p).nest);
    return generate_lattice(recipe, circuit);
}

}  // namespace tqec
