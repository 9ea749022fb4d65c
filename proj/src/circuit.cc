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

#include "xeblab/circuit.h"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <stdexcept>

#include "xeblab/errors.h"

namespace xeblab {

namespace {

constexpr double kUnitarityTolerance = 1e-10;
constexpr size_t kMaxParsedLayer = 10'000'000;

Bitstring low_mask(size_t n) {
    return n >= 64 ? ~Bitstring{0} : (Bitstring{1} << n) - 1;
}

void validate_layers(size_t n, const std::vector<Layer> &layers) {
    std::vector<size_t> last_use(n, SIZE_MAX);
    for (size_t l = 0; l < layers.size(); l++) {
        auto claim = [&](uint32_t q) {
            if (q >= n) {
                throw std::invalid_argument(
                    fmt::format("layer {}: qubit {} out of range for {} qubits", l, q, n));
            }
            if (last_use[q] == l) {
                throw std::invalid_argument(fmt::format("layer {}: qubit {} used twice", l, q));
            }
            last_use[q] = l;
        };
        for (const Gate &g : layers[l]) {
            switch (g.kind) {
                case GateKind::kUnitary:
                    claim(g.q0);
                    if (unitarity_error(g.matrix) > kUnitarityTolerance) {
                        throw std::invalid_argument(
                            fmt::format("layer {}: matrix on qubit {} is not unitary", l, g.q0));
                    }
                    break;
                case GateKind::kCZ:
                    if (g.q0 == g.q1) {
                        throw std::invalid_argument(fmt::format("layer {}: CZ targets must differ", l));
                    }
                    claim(g.q0);
                    claim(g.q1);
                    break;
                case GateKind::kX:
                    claim(g.q0);
                    break;
            }
        }
    }
}

Layer mask_layer(Bitstring mask, size_t n) {
    Layer layer;
    for (size_t q = 0; q < n; q++) {
        if ((mask >> q) & 1) {
            layer.push_back(Gate::x(static_cast<uint32_t>(q)));
        }
    }
    return layer;
}

}  // namespace

std::string format_bitstring(Bitstring z, size_t n) {
    std::string out(n, '0');
    for (size_t q = 0; q < n; q++) {
        if ((z >> q) & 1) {
            out[n - 1 - q] = '1';
        }
    }
    return out;
}

Bitstring parse_bitstring(std::string_view text) {
    if (text.size() > 64) {
        throw std::invalid_argument("bitstring longer than 64 characters");
    }
    Bitstring z = 0;
    for (char c : text) {
        if (c != '0' && c != '1') {
            throw std::invalid_argument(fmt::format("bad bitstring character '{}'", c));
        }
        z = (z << 1) | static_cast<Bitstring>(c == '1');
    }
    return z;
}

Gate Gate::unitary(uint32_t qubit, const Matrix2 &matrix) {
    Gate g;
    g.kind = GateKind::kUnitary;
    g.q0 = qubit;
    g.matrix = matrix;
    return g;
}

Gate Gate::cz(uint32_t a, uint32_t b) {
    Gate g;
    g.kind = GateKind::kCZ;
    g.q0 = a;
    g.q1 = b;
    return g;
}

Gate Gate::x(uint32_t qubit) {
    Gate g;
    g.kind = GateKind::kX;
    g.q0 = qubit;
    return g;
}

bool Gate::operator==(const Gate &other) const {
    if (kind != other.kind || q0 != other.q0) {
        return false;
    }
    switch (kind) {
        case GateKind::kUnitary:
            return matrix == other.matrix;
        case GateKind::kCZ:
            return q1 == other.q1;
        case GateKind::kX:
            return true;
    }
    return false;
}

double unitarity_error(const Matrix2 &m) {
    double worst = 0;
    for (int r = 0; r < 2; r++) {
        for (int c = 0; c < 2; c++) {
            // (U^dagger U)_{rc} = sum_k conj(U_{kr}) U_{kc}
            std::complex<double> v = std::conj(m[r]) * m[c] + std::conj(m[2 + r]) * m[2 + c];
            if (r == c) {
                v -= 1.0;
            }
            worst = std::max(worst, std::abs(v));
        }
    }
    return worst;
}

Circuit::Circuit(size_t num_qubits, uint64_t seed, std::vector<Layer> layers)
    : num_qubits_(num_qubits), seed_(seed), layers_(std::move(layers)) {
    if (num_qubits_ > kMaxCircuitQubits) {
        throw std::invalid_argument(fmt::format("at most {} qubits are supported", kMaxCircuitQubits));
    }
    validate_layers(num_qubits_, layers_);
    while (!layers_.empty() && layers_.back().empty()) {
        layers_.pop_back();
    }
}

size_t Circuit::gate_count() const {
    size_t total = 0;
    for (const Layer &layer : layers_) {
        total += layer.size();
    }
    return total;
}

bool Circuit::ends_with_not_mask() const {
    if (layers_.empty() || layers_.back().empty()) {
        return false;
    }
    return std::all_of(layers_.back().begin(), layers_.back().end(), [](const Gate &g) {
        return g.kind == GateKind::kX;
    });
}

Bitstring Circuit::final_not_mask() const {
    if (!ends_with_not_mask()) {
        return 0;
    }
    Bitstring mask = 0;
    for (const Gate &g : layers_.back()) {
        mask |= Bitstring{1} << g.q0;
    }
    return mask;
}

void CircuitDistribution::validate() const {
    if (num_qubits < 1 || num_qubits > kMaxCircuitQubits) {
        throw ConfigError(fmt::format("qubit count must be in [1, {}], got {}", kMaxCircuitQubits, num_qubits));
    }
    if (topology.kind == Topology::Kind::kGrid2D) {
        if (topology.rows == 0 || topology.cols == 0 || topology.rows * topology.cols != num_qubits) {
            throw ConfigError(fmt::format(
                "grid {}x{} does not cover {} qubits", topology.rows, topology.cols, num_qubits));
        }
    }
}

std::vector<std::vector<std::pair<uint32_t, uint32_t>>> edge_classes(const CircuitDistribution &dist) {
    dist.validate();
    std::vector<std::vector<std::pair<uint32_t, uint32_t>>> classes;
    if (dist.topology.kind == Topology::Kind::kChain1D) {
        classes.resize(2);
        for (uint32_t q = 0; q + 1 < dist.num_qubits; q++) {
            classes[q % 2].emplace_back(q, q + 1);
        }
        return classes;
    }
    size_t rows = dist.topology.rows;
    size_t cols = dist.topology.cols;
    auto index = [&](size_t r, size_t c) {
        return static_cast<uint32_t>(r * cols + c);
    };
    classes.resize(4);
    for (size_t r = 0; r < rows; r++) {
        for (size_t c = 0; c + 1 < cols; c++) {
            classes[c % 2].emplace_back(index(r, c), index(r, c + 1));
        }
    }
    for (size_t r = 0; r + 1 < rows; r++) {
        for (size_t c = 0; c < cols; c++) {
            classes[2 + r % 2].emplace_back(index(r, c), index(r + 1, c));
        }
    }
    return classes;
}

Matrix2 haar_unitary(Rng &rng) {
    std::complex<double> a0 = rng.complex_normal();
    std::complex<double> a1 = rng.complex_normal();
    std::complex<double> b0 = rng.complex_normal();
    std::complex<double> b1 = rng.complex_normal();

    double na = std::sqrt(std::norm(a0) + std::norm(a1));
    a0 /= na;
    a1 /= na;
    // Remove the component of the second column along the first. The diagonal
    // of the implied R factor is then real and positive, which is the phase
    // convention that makes Q Haar distributed.
    std::complex<double> overlap = std::conj(a0) * b0 + std::conj(a1) * b1;
    b0 -= overlap * a0;
    b1 -= overlap * a1;
    double nb = std::sqrt(std::norm(b0) + std::norm(b1));
    b0 /= nb;
    b1 /= nb;
    return {a0, b0, a1, b1};
}

Circuit sample_circuit(const CircuitDistribution &dist, uint64_t seed) {
    dist.validate();
    auto classes = edge_classes(dist);
    Rng rng(seed, 0);
    std::vector<Layer> layers;
    layers.reserve(dist.depth + 1);
    for (size_t l = 0; l < dist.depth; l++) {
        Layer layer;
        if (l % 2 == 0) {
            for (size_t q = 0; q < dist.num_qubits; q++) {
                layer.push_back(Gate::unitary(static_cast<uint32_t>(q), haar_unitary(rng)));
            }
        } else {
            for (auto [a, b] : classes[(l / 2) % classes.size()]) {
                layer.push_back(Gate::cz(a, b));
            }
        }
        layers.push_back(std::move(layer));
    }
    if (dist.final_not_mask_layer) {
        Bitstring mask = rng.next_u64() & low_mask(dist.num_qubits);
        layers.push_back(mask_layer(mask, dist.num_qubits));
    }
    return Circuit(dist.num_qubits, seed, std::move(layers));
}

Circuit append_not_mask(const Circuit &circuit, Bitstring z) {
    size_t n = circuit.num_qubits();
    if ((z & ~low_mask(n)) != 0) {
        throw std::invalid_argument(fmt::format("mask has bits beyond qubit count {}", n));
    }
    if (z == 0) {
        return circuit;
    }
    std::vector<Layer> layers = circuit.layers();
    if (circuit.ends_with_not_mask()) {
        layers.back() = mask_layer(circuit.final_not_mask() ^ z, n);
    } else {
        layers.push_back(mask_layer(z, n));
    }
    return Circuit(n, circuit.seed(), std::move(layers));
}

Circuit append_not_mask(const Circuit &circuit, std::string_view z) {
    if (z.size() != circuit.num_qubits()) {
        throw std::invalid_argument(
            fmt::format("mask length {} does not match qubit count {}", z.size(), circuit.num_qubits()));
    }
    return append_not_mask(circuit, parse_bitstring(z));
}

std::string serialize_circuit(const Circuit &circuit) {
    std::string out = fmt::format("qubits {}\nseed {}\n", circuit.num_qubits(), circuit.seed());
    for (size_t l = 0; l < circuit.layers().size(); l++) {
        for (const Gate &g : circuit.layers()[l]) {
            switch (g.kind) {
                case GateKind::kUnitary:
                    out += fmt::format("{} U {}", l, g.q0);
                    for (const auto &v : g.matrix) {
                        out += fmt::format(" {:.17g} {:.17g}", v.real(), v.imag());
                    }
                    out += '\n';
                    break;
                case GateKind::kCZ:
                    out += fmt::format("{} CZ {} {}\n", l, g.q0, g.q1);
                    break;
                case GateKind::kX:
                    out += fmt::format("{} X {}\n", l, g.q0);
                    break;
            }
        }
    }
    return out;
}

namespace {

std::vector<std::string_view> split_tokens(std::string_view line) {
    std::vector<std::string_view> tokens;
    size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) {
            i++;
        }
        size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') {
            i++;
        }
        if (i > start) {
            tokens.push_back(line.substr(start, i - start));
        }
    }
    return tokens;
}

template <typename T>
T parse_number(std::string_view token, size_t line, const char *what) {
    T value{};
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw ParseError(line, fmt::format("bad {} '{}'", what, token));
    }
    return value;
}

}  // namespace

Circuit parse_circuit(std::string_view text) {
    size_t line_no = 0;
    size_t pos = 0;
    bool have_qubits = false;
    bool have_seed = false;
    size_t n = 0;
    uint64_t seed = 0;
    std::map<size_t, Layer> layers;

    while (pos <= text.size()) {
        size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        line_no++;
        if (size_t hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        auto tok = split_tokens(line);
        if (tok.empty()) {
            if (end == text.size()) {
                break;
            }
            continue;
        }

        if (!have_qubits) {
            if (tok.size() != 2 || tok[0] != "qubits") {
                throw ParseError(line_no, "expected 'qubits <n>'");
            }
            n = parse_number<size_t>(tok[1], line_no, "qubit count");
            if (n > kMaxCircuitQubits) {
                throw ParseError(line_no, fmt::format("at most {} qubits are supported", kMaxCircuitQubits));
            }
            have_qubits = true;
            continue;
        }
        if (!have_seed) {
            if (tok.size() != 2 || tok[0] != "seed") {
                throw ParseError(line_no, "expected 'seed <u64>'");
            }
            seed = parse_number<uint64_t>(tok[1], line_no, "seed");
            have_seed = true;
            continue;
        }

        if (tok.size() < 3) {
            throw ParseError(line_no, "gate line needs '<layer> <kind> <qubits...>'");
        }
        size_t layer = parse_number<size_t>(tok[0], line_no, "layer index");
        if (layer > kMaxParsedLayer) {
            throw ParseError(line_no, "layer index too large");
        }
        auto qubit = [&](std::string_view t) {
            auto q = parse_number<uint32_t>(t, line_no, "qubit index");
            if (q >= n) {
                throw ParseError(line_no, fmt::format("qubit {} out of range for {} qubits", q, n));
            }
            return q;
        };
        Gate gate;
        if (tok[1] == "U") {
            if (tok.size() != 11) {
                throw ParseError(line_no, "U gate needs a qubit and 8 matrix entries");
            }
            Matrix2 m;
            for (size_t i = 0; i < 4; i++) {
                m[i] = {parse_number<double>(tok[3 + 2 * i], line_no, "matrix entry"),
                        parse_number<double>(tok[4 + 2 * i], line_no, "matrix entry")};
            }
            if (unitarity_error(m) > kUnitarityTolerance) {
                throw ParseError(line_no, "matrix is not unitary");
            }
            gate = Gate::unitary(qubit(tok[2]), m);
        } else if (tok[1] == "CZ") {
            if (tok.size() != 4) {
                throw ParseError(line_no, "CZ gate needs two qubits");
            }
            gate = Gate::cz(qubit(tok[2]), qubit(tok[3]));
            if (gate.q0 == gate.q1) {
                throw ParseError(line_no, "CZ targets must differ");
            }
        } else if (tok[1] == "X") {
            if (tok.size() != 3) {
                throw ParseError(line_no, "X gate needs one qubit");
            }
            gate = Gate::x(qubit(tok[2]));
        } else {
            throw ParseError(line_no, fmt::format("unknown gate kind '{}'", tok[1]));
        }
        Layer &target = layers[layer];
        auto clash = [&](uint32_t q) {
            return std::any_of(target.begin(), target.end(), [&](const Gate &g) {
                return g.q0 == q || (g.kind == GateKind::kCZ && g.q1 == q);
            });
        };
        if (clash(gate.q0) || (gate.kind == GateKind::kCZ && clash(gate.q1))) {
            throw ParseError(line_no, fmt::format("qubit used twice in layer {}", layer));
        }
        target.push_back(gate);
    }

    if (!have_qubits || !have_seed) {
        throw ParseError(line_no, "missing 'qubits' or 'seed' header");
    }
    std::vector<Layer> ordered;
    if (!layers.empty()) {
        ordered.resize(layers.rbegin()->first + 1);
        for (auto &[index, layer] : layers) {
            ordered[index] = std::move(layer);
        }
    }
    return Circuit(n, seed, std::move(ordered));
}

}  // namespace xeblab
