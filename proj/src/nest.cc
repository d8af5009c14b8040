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

#include "tqec/nest.h"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace tqec {

double stick_probability(std::span<const double> ps) {
    const std::size_t n = ps.size();
    std::vector<double> suffix(n + 1, 1.0);
    for (std::size_t k = n; k-- > 0;) suffix[k] = suffix[k + 1] * (1.0 - ps[k]);
    double prefix = 1.0;
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        total += ps[k] * prefix * suffix[k + 1];
        prefix *= 1.0 - ps[k];
    }
    return total;
}

std::uint64_t Nest::key(int a, int b, int boundary) {
    if (boundary >= 0) return (static_cast<std::uint64_t>(a) << 32) | (0x80000000u | static_cast<std::uint32_t>(boundary));
    if (b < a) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

void Nest::add_ball(const Ball &ball) {
    if (!balls_.emplace(ball.id, ball).second) {
        throw std::logic_error("set " + std::to_string(ball.id) + " finalized twice");
    }
}

Stick &Nest::upsert_stick(Kind kind, int a, int b, int boundary, const Contributor &contributor) {
    if (!(contributor.p > 0 && contributor.p < 1)) {
        throw std::invalid_argument("stick contributor probability " + std::to_string(contributor.p) + " outside (0, 1)");
    }
    if (boundary < 0 && a == b) throw std::invalid_argument("stick endpoints must differ");
    if (boundary < 0 && b < a) std::swap(a, b);
    auto [it, created] = sticks_.try_emplace(key(a, b, boundary));
    Stick &s = it->second;
    if (created) {
        s.kind = kind;
        s.a = a;
        s.b = boundary >= 0 ? -1 : b;
        s.boundary = boundary;
    }
    s.contributors.push_back(contributor);
    std::vector<double> ps;
    ps.reserve(s.contributors.size());
    for (const auto &c : s.contributors) ps.push_back(c.p);
    s.p_stick = stick_probability(ps);
    return s;
}

const Ball *Nest::ball(int id) const {
    auto it = balls_.find(id);
    return it == balls_.end() ? nullptr : &it->second;
}

std::vector<const Stick *> Nest::sticks() const {
    std::vector<const Stick *> out;
    out.reserve(sticks_.size());
    for (const auto &[k, s] : sticks_) out.push_back(&s);
    std::sort(out.begin(), out.end(), [](const Stick *x, const Stick *y) {
        return std::tie(x->a, x->b, x->boundary) < std::tie(y->a, y->b, y->boundary);
    });
    return out;
}

const Stick *Nest::find_stick(int a, int b, int boundary) const {
    auto it = sticks_.find(key(a, b, boundary));
    return it == sticks_.end() ? nullptr : &it->second;
}

void Nest::resolve_flips(const std::function<bool(Label, Kind)> &flip_of) {
    for (auto &[k, s] : sticks_) {
        double weight_flip = 0;
        double weight_keep = 0;
        for (auto &c : s.contributors) {
            c.flip = flip_of(c.label, s.kind);
            (c.flip ? weight_flip : weight_keep) += c.p;
        }
        s.flip = weight_flip > weight_keep;
        s.ambiguous_flip = weight_flip > 0 && weight_keep > 0;
    }
}

int Nest::min_t() const {
    int t = 0;
    bool first = true;
    for (const auto &[id, b] : balls_) {
        t = first ? b.coord.t : std::min(t, b.coord.t);
        first = false;
    }
    return t;
}

int Nest::max_t() const {
    int t = 0;
    for (const auto &[id, b] : balls_) t = std::max(t, b.coord.t);
    return t;
}

void Nest::prune(int t_min) {
    if (balls_.empty()) return;
    t_min = std::min(t_min, max_t());
    for (auto it = balls_.begin(); it != balls_.end();) {
        it = it->second.coord.t < t_min ? balls_.erase(it) : std::next(it);
    }
    for (auto it = sticks_.begin(); it != sticks_.end();) {
        const Stick &s = it->second;
        bool gone = !balls_.count(s.a) || (s.b >= 0 && !balls_.count(s.b));
        it = gone ? sticks_.erase(it) : std::next(it);
    }
}

void export_nest(const Nest &nest, std::ostream &out, NestExportOptions options) {
    using nlohmann::json;
    json doc;
    doc["format"] = "tqec-nest";
    doc["version"] = 1;
    json boundaries = json::array();
    for (const auto &b : nest.boundaries()) {
        boundaries.push_back({{"id", b.id},
                              {"kind", kind_name(b.kind)},
                              {"nature", b.nature == BoundaryNature::Spatial ? "spatial" : "temporal"},
                              {"name", b.name}});
    }
    doc["boundaries"] = boundaries;
    json balls = json::array();
    for (const auto &[id, b] : nest.balls()) {
        balls.push_back({{"id", id}, {"kind", kind_name(b.kind)}, {"i", b.coord.i}, {"j", b.coord.j}, {"t", b.coord.t}});
    }
    doc["balls"] = balls;
    const auto sticks = nest.sticks();
    double p_max = 0;
    for (const auto *s : sticks) p_max = std::max(p_max, s->p_stick);
    json list = json::array();
    for (const auto *s : sticks) {
        json j{{"kind", kind_name(s->kind)},
               {"a", s->a},
               {"p_stick", s->p_stick},
               {"n_contributors", s->contributors.size()},
               {"diameter", p_max > 0 ? s->p_stick / p_max : 0.0},
               {"flip", s->flip}};
        if (s->to_boundary()) {
            j["boundary"] = s->boundary;
        } else {
            j["b"] = s->b;
        }
        if (options.provenance) {
            json contributors = json::array();
            for (const auto &c : s->contributors) {
                contributors.push_back({{"label", c.label},
                                        {"p", c.p},
                                        {"step", c.where.step},
                                        {"gate", c.where.gate},
                                        {"entry", c.where.entry},
                                        {"flip", c.flip}});
            }
            j["contributors"] = contributors;
        }
        list.push_back(std::move(j));
    }
    doc["sticks"] = list;
    out << doc.dump(1) << "\n";
}

}  // namespace tqec
