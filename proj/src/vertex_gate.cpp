// Copyright 2026 The lqgsim Authors
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

#include "lqgsim/vertex_gate.hpp"

#include <cmath>
#include <sstream>

namespace lqgsim {

namespace simplex {

std::pair<int, int> face_tets(int face) {
  int k = 0;
  for (int a = 0; a < kTets; ++a)
    for (int b = a + 1; b < kTets; ++b)
      if (k++ == face) return {a, b};
  throw std::out_of_range("face index out of range");
}

int face_index(int tet_a, int tet_b) {
  if (tet_a > tet_b) std::swap(tet_a, tet_b);
  if (tet_a == tet_b || tet_a < 0 || tet_b >= kTets) throw std::out_of_range("bad tetrahedron pair");
  int k = 0;
  for (int a = 0; a < kTets; ++a)
    for (int b = a + 1; b < kTets; ++b, ++k)
      if (a == tet_a && b == tet_b) return k;
  return -1;
}

std::array<int, 4> tet_faces(int tet) {
  std::array<int, 4> faces{};
  int n = 0;
  for (int other = 0; other < kTets; ++other)
    if (other != tet) faces[n++] = face_index(tet, other);
  return faces;
}

}  // namespace simplex

TetSpinTable tet_spins_from_faces(const FaceSpins& faces) {
  TetSpinTable table{};
  for (int t = 0; t < simplex::kTets; ++t) {
    const auto f = simplex::tet_faces(t);
    for (int i = 0; i < 4; ++i) table[t][i] = faces[f[i]];
  }
  return table;
}

RVector VertexGate::singular_values() const {
  if (matrix.size() == 0) return RVector();
  return Eigen::JacobiSVD<CMatrix>(matrix).singularValues();
}

void enforce_subunitary(VertexGate& gate, double delta) {
  const RVector s = gate.singular_values();
  const double smax = s.size() ? s.maxCoeff() : 0.0;
  if (smax >= 1.0) {
    const double factor = smax / (1.0 - delta);
    gate.matrix /= factor;
    gate.scale *= factor;
  }
}

namespace {

// Intertwiner bases of the five tetrahedra plus the per-face mixed-radix data
// needed to turn a face assignment into per-tetrahedron tensor indices.
struct SimplexData {
  std::array<su2::IntertwinerSpace, simplex::kTets> spaces;
  std::array<int, simplex::kFaces> twice_j{};
};

SimplexData prepare(const FaceSpins& faces) {
  SimplexData data;
  const auto tets = tet_spins_from_faces(faces);
  for (int f = 0; f < simplex::kFaces; ++f) data.twice_j[f] = faces[f].twice();
  for (int t = 0; t < simplex::kTets; ++t) {
    data.spaces[t] = su2::intertwiner_space(tets[t]);
    if (data.spaces[t].dim() == 0) {
      std::ostringstream msg;
      msg << "inadmissible spins: tetrahedron " << t + 1 << " (";
      for (int i = 0; i < 4; ++i) msg << (i ? "," : "") << tets[t][i].str();
      msg << ") has an empty intertwiner space";
      throw ValidationError(msg.str());
    }
  }
  return data;
}

// k[f] = j_f - m_f is the magnetic index on the lower-numbered tetrahedron of
// face f; the partner sees -m_f, i.e. index 2j_f - k[f].
int leg_index(const SimplexData& data, int tet, const std::array<int, simplex::kFaces>& k) {
  int index = 0;
  for (int f : simplex::tet_faces(tet)) {
    const int d = data.twice_j[f] + 1;
    const bool lower = simplex::face_tets(f).first == tet;
    index = index * d + (lower ? k[f] : data.twice_j[f] - k[f]);
  }
  return index;
}

// Iterates all assignments of the listed faces, leaving other entries of k alone.
template <typename Fn>
void for_each_assignment(const std::vector<int>& faces, const std::array<int, simplex::kFaces>& twice_j,
                         std::array<int, simplex::kFaces>& k, Fn&& fn) {
  for (int f : faces) k[f] = 0;
  while (true) {
    fn();
    std::size_t pos = faces.size();
    while (pos > 0) {
      const int f = faces[pos - 1];
      if (++k[f] <= twice_j[f]) break;
      k[f] = 0;
      --pos;
    }
    if (pos == 0) return;
  }
}

double face_sign(const std::vector<int>& faces, const std::array<int, simplex::kFaces>& k) {
  int parity = 0;
  for (int f : faces) parity += k[f];
  return parity % 2 ? -1.0 : 1.0;
}

}  // namespace

CMatrix bf_vertex_matrix(const FaceSpins& face_spins) {
  const SimplexData data = prepare(face_spins);
  const auto& sp = data.spaces;

  std::vector<int> cross, inner_in, inner_out;
  for (int f = 0; f < simplex::kFaces; ++f) {
    const auto [a, b] = simplex::face_tets(f);
    const bool a_in = a < simplex::kInputs, b_in = b < simplex::kInputs;
    (a_in && b_in ? inner_in : (!a_in && !b_in ? inner_out : cross)).push_back(f);
  }

  Eigen::Index n_cross = 1;
  for (int f : cross) n_cross *= data.twice_j[f] + 1;

  const int d0 = sp[0].dim(), d1 = sp[1].dim(), d2 = sp[2].dim(), d3 = sp[3].dim(), d4 = sp[4].dim();
  CMatrix inputs = CMatrix::Zero(d0 * d1 * d2, n_cross);
  CMatrix outputs = CMatrix::Zero(d3 * d4, n_cross);

  std::array<int, simplex::kFaces> k{};
  Eigen::Index c = 0;
  for_each_assignment(cross, data.twice_j, k, [&] {
    const double cross_sign = face_sign(cross, k);
    for_each_assignment(inner_in, data.twice_j, k, [&] {
      const double sign = cross_sign * face_sign(inner_in, k);
      const int i0 = leg_index(data, 0, k), i1 = leg_index(data, 1, k), i2 = leg_index(data, 2, k);
      for (int a = 0; a < d0; ++a) {
        const cd x = sp[0].basis(i0, a);
        if (x == 0.0) continue;
        for (int b = 0; b < d1; ++b) {
          const cd xy = x * sp[1].basis(i1, b);
          if (xy == 0.0) continue;
          for (int e = 0; e < d2; ++e) inputs((a * d1 + b) * d2 + e, c) += sign * xy * sp[2].basis(i2, e);
        }
      }
    });
    for_each_assignment(inner_out, data.twice_j, k, [&] {
      const double sign = face_sign(inner_out, k);
      const int i3 = leg_index(data, 3, k), i4 = leg_index(data, 4, k);
      for (int a = 0; a < d3; ++a)
        for (int b = 0; b < d4; ++b)
          outputs(a * d4 + b, c) += sign * std::conj(sp[3].basis(i3, a)) * std::conj(sp[4].basis(i4, b));
    });
    ++c;
  });
  return outputs * inputs.transpose();
}

VertexGate bf_vertex_gate(const FaceSpins& face_spins) {
  VertexGate gate;
  gate.matrix = bf_vertex_matrix(face_spins);
  gate.face_spins = face_spins;
  gate.tet_spins = tet_spins_from_faces(face_spins);
  for (int t = 0; t < simplex::kTets; ++t) gate.leg_dims[t] = su2::intertwiner_dimension(gate.tet_spins[t]);
  enforce_subunitary(gate);
  return gate;
}

VertexGate make_gate(CMatrix matrix, const TetSpinTable& tet_spins, const FaceSpins& face_spins,
                     std::optional<std::array<int, simplex::kTets>> leg_dims, double scale) {
  for (int t = 0; t < simplex::kTets; ++t) {
    const auto faces = simplex::tet_faces(t);
    for (int i = 0; i < 4; ++i) {
      if (tet_spins[t][i] != face_spins[faces[i]]) {
        std::ostringstream msg;
        msg << "tetrahedron " << t + 1 << " spin " << i + 1 << " (" << tet_spins[t][i].str()
            << ") disagrees with face spin " << faces[i] + 1 << " (" << face_spins[faces[i]].str() << ")";
        throw ValidationError(msg.str());
      }
    }
  }
  std::array<int, simplex::kTets> dims{};
  for (int t = 0; t < simplex::kTets; ++t) {
    const int full = su2::intertwiner_dimension(tet_spins[t]);
    dims[t] = leg_dims ? (*leg_dims)[t] : full;
    if (dims[t] < 1 || dims[t] > full) {
      throw ValidationError("tetrahedron " + std::to_string(t + 1) + " leg dimension " +
                            std::to_string(dims[t]) + " outside 1.." + std::to_string(full));
    }
  }
  const int rows = dims[3] * dims[4], cols = dims[0] * dims[1] * dims[2];
  if (matrix.rows() != rows || matrix.cols() != cols) {
    throw ValidationError("dimension mismatch: matrix is " + std::to_string(matrix.rows()) + "x" +
                          std::to_string(matrix.cols()) + " but the spins require " + std::to_string(rows) +
                          "x" + std::to_string(cols));
  }
  if (!matrix.allFinite()) throw ValidationError("gate matrix contains NaN or Inf entries");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ValidationError("scale must be a positive number");

  VertexGate gate;
  gate.matrix = std::move(matrix);
  gate.tet_spins = tet_spins;
  gate.face_spins = face_spins;
  gate.leg_dims = dims;
  gate.scale = scale;
  enforce_subunitary(gate);
  return gate;
}

std::vector<Block> subspace_decomposition(int dim) {
  if (dim < 1) throw ValidationError("subspace decomposition needs dim >= 1");
  std::vector<Block> blocks;
  for (int begin = 0; begin < dim; begin += 2) blocks.push_back({begin, std::min(2, dim - begin)});
  return blocks;
}

VertexGate restrict_gate(const VertexGate& gate, const SubspaceChoice& choice) {
  std::array<Block, simplex::kTets> blocks{};
  for (int t = 0; t < simplex::kTets; ++t) {
    const auto all = subspace_decomposition(gate.leg_dims[t]);
    if (choice[t] < 0 || choice[t] >= static_cast<int>(all.size())) {
      throw ValidationError("subspace index " + std::to_string(choice[t] + 1) + " out of range 1.." +
                            std::to_string(all.size()) + " for tetrahedron " + std::to_string(t + 1));
    }
    blocks[t] = all[choice[t]];
  }
  const auto& d = gate.leg_dims;
  VertexGate out = gate;
  for (int t = 0; t < simplex::kTets; ++t) out.leg_dims[t] = blocks[t].size;
  out.restriction = choice;
  out.matrix.resize(blocks[3].size * blocks[4].size, blocks[0].size * blocks[1].size * blocks[2].size);

  for (int b = 0; b < blocks[3].size; ++b)
    for (int c = 0; c < blocks[4].size; ++c) {
      const int row = (blocks[3].begin + b) * d[4] + blocks[4].begin + c;
      for (int x = 0; x < blocks[0].size; ++x)
        for (int y = 0; y < blocks[1].size; ++y)
          for (int z = 0; z < blocks[2].size; ++z) {
            const int col = ((blocks[0].begin + x) * d[1] + blocks[1].begin + y) * d[2] + blocks[2].begin + z;
            out.matrix(b * blocks[4].size + c, (x * blocks[1].size + y) * blocks[2].size + z) = gate.matrix(row, col);
          }
    }
  return out;
}

std::vector<SubspaceChoice> all_subspace_choices(const VertexGate& gate) {
  std::array<int, simplex::kTets> counts{};
  int total = 1;
  for (int t = 0; t < simplex::kTets; ++t) {
    counts[t] = subspace_count(gate.leg_dims[t]);
    total *= counts[t];
  }
  std::vector<SubspaceChoice> out;
  out.reserve(total);
  for (int n = 0; n < total; ++n) {
    SubspaceChoice c{};
    int rest = n;
    for (int t = simplex::kTets - 1; t >= 0; --t) {
      c[t] = rest % counts[t];
      rest /= counts[t];
    }
    out.push_back(c);
  }
  return out;
}

SubspaceChoice parse_choice(const std::string& text) {
  SubspaceChoice choice{};
  std::stringstream in(text);
  std::string item;
  int t = 0;
  while (std::getline(in, item, ',')) {
    if (t >= simplex::kTets) throw ValidationError("subspace choice needs exactly 5 entries");
    if (item == "+") choice[t] = 0;
    else if (item == "-") choice[t] = 1;
    else {
      try {
        std::size_t used = 0;
        choice[t] = std::stoi(item, &used) - 1;
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw ValidationError("bad subspace choice entry '" + item + "'");
      }
    }
    ++t;
  }
  if (t != simplex::kTets) throw ValidationError("subspace choice needs exactly 5 entries");
  return choice;
}

}  // namespace lqgsim
