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

#ifndef TQEC_LATTICE_H
#define TQEC_LATTICE_H

#include <map>
#include <ostream>
#include <string_view>
#include <vector>

#include "tqec/circuit.h"
#include "tqec/error_model.h"
#include "tqec/nest.h"

namespace tqec {

inline constexpr double kMinStickProbability = 1e-15;
inline constexpr double kMaxStickProbability = 0.999999;

/// w = -ln(p), with p clamped to [1e-15, 0.999999].
double line_weight(double p_stick);

struct Dot {
    int id = 0;
    Kind kind = Kind::Primal;
    Coord3 coord;
    bool present = false;
};

struct Line {
    Kind kind = Kind::Primal;
    int a = 0;
    int b = -1;
    int boundary = -1;
    double weight = 0;
    double p = 0;
    bool flip = false;

    bool to_boundary() const { return boundary >= 0; }
};

/// Decoding graph: dots indexed by set id, lines sorted by (a, b, boundary).
struct Lattice {
    std::vector<Dot> dots;
    std::vector<Line> lines;
    std::vector<BoundaryDecl> boundaries;

    const Dot *dot(int id) const;
    int num_layers() const;
    void sort_lines();
};

Lattice nest_to_lattice(const Nest &nest);

/// Unit weights between same-kind sets one spacing apart and from every
/// boundary-associated set to its boundary.
Lattice build_manhattan(const Circuit &circuit);
Lattice build_manhattan(std::string_view code, int d, int rounds, Basis basis = Basis::Z);

/// JSON {"format": "tqec-lattice", "version": 1, "dots": [...], "lines": [...]}.
void export_lattice(const Lattice &lattice, std::ostream &out);

/// A line as seen from the endpoint that owns it (the later one): either a
/// displacement to the other dot or a boundary id.
struct Offset {
    int di = 0;
    int dj = 0;
    int dt = 0;
    int boundary = -1;
    double weight = 0;
    double p = 0;
    bool flip = false;
};

struct LayerDot {
    Kind kind = Kind::Primal;
    int i = 0;
    int j = 0;
    int block = 0;
    auto operator<=>(const LayerDot &) const = default;
};

enum class RecipeStatus { Converged, Finite };

/// Compressed lattice: unique offsets, unique blocks (sorted offset ids per
/// dot), unique layers (blocks per dot position) and the layer sequence.
/// A converged recipe stores a head, one repeated bulk layer and a tail, so
/// it can produce a lattice for any number of rounds.
struct Recipe {
    std::vector<Offset> offsets;
    std::vector<std::vector<int>> blocks;
    std::vector<std::vector<LayerDot>> layers;
    std::vector<int> head;
    int bulk = -1;
    std::vector<int> tail;
    RecipeStatus status = RecipeStatus::Finite;
    int source_layers = 0;
    std::vector<BoundaryDecl> boundaries;
    double weight_tolerance = 1e-9;

    /// Layer id used at layer t of a lattice with `total_layers` layers.
    int layer_at(int t, int total_layers) const;
    int min_layers() const;
};

Recipe compile_recipe(const Lattice &lattice, double weight_tolerance = 1e-9);

/// JSON {"format": "tqec-recipe", "version": 1, "offsets": [...], "blocks": [...], "layers": [...]}.
void export_recipe(const Recipe &recipe, std::ostream &out);

struct BootupOptions {
    /// Periodic circuits that do not converge raise an error when set.
    bool require_convergence = false;
};

/// Analyzes the circuit and compresses its Autotuned lattice.
Recipe bootup(const Circuit &circuit, const ModelLibrary &models, double p, BootupOptions options = {});

/// Lines owned by the dots of layer t of `target`.
std::vector<Line> generate_layer(const Recipe &recipe, int t, const Circuit &target, const CircuitIndex &index);
Lattice generate_lattice(const Recipe &recipe, const Circuit &target);

/// Autotuned lattice for a built-in code; long circuits are produced from a
/// recipe booted on a short probe circuit of the same code.
Lattice autotuned_lattice(const Circuit &circuit, const ModelLibrary &models, double p, int probe_rounds = 8);

}  // namespace tqec

#endif  // TQEC_LATTICE_H
