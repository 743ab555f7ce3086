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

#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lqgsim/dilation.hpp"
#include "lqgsim/entanglement.hpp"
#include "lqgsim/interferometer.hpp"
#include "lqgsim/io.hpp"
#include "lqgsim/photonics.hpp"
#include "lqgsim/spinfoam.hpp"
#include "lqgsim/su2.hpp"
#include "lqgsim/vertex_gate.hpp"

namespace lqgsim::cli {
namespace {

namespace fs = std::filesystem;
using io::json;

// ---------------------------------------------------------------------------
// Parsing helpers

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

int parse_int(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ValidationError(what + ": \"" + text + "\" is not an integer");
}

double parse_double(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ValidationError(what + ": \"" + text + "\" is not a number");
}

std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
  std::vector<int> out;
  for (const auto& p : split(text, ',')) out.push_back(parse_int(p, what));
  return out;
}

// "1-4" or "1,2,5", 1-based, returned 0-based.
std::vector<int> parse_modes(const std::string& text, int n_modes) {
  std::vector<int> modes;
  for (const auto& part : split(text, ',')) {
    const auto dash = part.find('-');
    int lo, hi;
    if (dash == std::string::npos) {
      lo = hi = parse_int(part, "mode list");
    } else {
      lo = parse_int(part.substr(0, dash), "mode range");
      hi = parse_int(part.substr(dash + 1), "mode range");
    }
    if (lo < 1 || hi > n_modes || lo > hi) {
      throw ValidationError("modes " + part + " out of range 1.." + std::to_string(n_modes));
    }
    for (int m = lo; m <= hi; ++m) modes.push_back(m - 1);
  }
  std::sort(modes.begin(), modes.end());
  modes.erase(std::unique(modes.begin(), modes.end()), modes.end());
  return modes;
}

std::string modes_label(const std::vector<int>& modes) {
  std::string s;
  for (std::size_t k = 0; k < modes.size(); ++k) s += (k ? ";" : "") + std::to_string(modes[k] + 1);
  return s;
}

json modes_json(const std::vector<int>& modes) {
  json out = json::array();
  for (int m : modes) out.push_back(m + 1);
  return out;
}

FaceSpins parse_face_spins(const std::string& text) {
  const auto v = parse_int_list(text, "--spins");
  if (v.size() != simplex::kFaces) {
    throw ValidationError("--spins needs " + std::to_string(simplex::kFaces) + " twice-spin integers, got " +
                          std::to_string(v.size()));
  }
  FaceSpins f;
  for (int k = 0; k < simplex::kFaces; ++k) {
    if (v[k] < 0) throw ValidationError("--spins: twice-spins must be non-negative");
    f[k] = su2::Spin(v[k]);
  }
  return f;
}

// ---------------------------------------------------------------------------
// Loaded optical circuits (dense unitary or mesh file)

struct LoadedCircuit {
  std::optional<DilatedUnitary> unitary;
  std::optional<MziMesh> mesh;
  OpticalCircuit circuit() const { return unitary ? OpticalCircuit(*unitary) : OpticalCircuit(*mesh); }
  int n_modes() const { return unitary ? unitary->dim() : mesh->n_modes; }
  int rows_a() const { return unitary ? unitary->rows_a : 0; }
  int cols_a() const { return unitary ? unitary->cols_a : 0; }
  CMatrix dense() const { return unitary ? unitary->u : reconstruct_unitary(*mesh); }
};

LoadedCircuit load_circuit(const std::string& path) {
  const json j = io::read_json_file(path);
  LoadedCircuit c;
  if (j.is_object() && j.contains("elements")) {
    c.mesh = io::mesh_from_json(j);
  } else {
    c.unitary = io::unitary_from_json(j);
  }
  return c;
}

// basis:j, super:j,j'[,chi] (1-based modes) or a state file. Shorter states
// are padded with vacuum amplitudes on the trailing modes.
PhotonState parse_input(const std::string& spec, int n_modes) {
  if (spec.rfind("basis:", 0) == 0) {
    const int j = parse_int(spec.substr(6), "basis input");
    if (j < 1 || j > n_modes) throw ValidationError("basis mode " + std::to_string(j) + " out of range 1.." + std::to_string(n_modes));
    return PhotonState::basis(n_modes, j - 1);
  }
  if (spec.rfind("super:", 0) == 0) {
    const auto parts = split(spec.substr(6), ',');
    if (parts.size() != 2 && parts.size() != 3) throw ValidationError("super input needs j,j' or j,j',chi");
    const int j = parse_int(parts[0], "super input"), jp = parse_int(parts[1], "super input");
    const double chi = parts.size() == 3 ? parse_double(parts[2], "super input phase") : 0.0;
    return PhotonState::superposition(n_modes, j - 1, jp - 1, chi);
  }
  const CVector v = io::state_from_json(io::read_json_file(spec));
  if (v.size() > n_modes) {
    throw ValidationError("state has " + std::to_string(v.size()) + " modes, circuit has " + std::to_string(n_modes));
  }
  if (std::abs(v.squaredNorm() - 1.0) > 1e-10) {
    throw ValidationError("input state is not normalized (norm^2 = " + std::to_string(v.squaredNorm()) + ")");
  }
  PhotonState s{CVector::Zero(n_modes)};
  s.amplitudes.head(v.size()) = v;
  return s;
}

// ---------------------------------------------------------------------------
// Output handling

struct Context {
  std::ostream& out;
  std::ostream& err;
  json config = json::object();
};

fs::path resolve_output(const std::string& path) {
  fs::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("LQGSIM_OUTPUT_DIR"); dir != nullptr && *dir != '\0') p = fs::path(dir) / p;
  }
  return p;
}

json with_header(json body, const Context& ctx) {
  json out{{"schema_version", io::kSchemaVersion}};
  out["config"] = ctx.config;
  for (auto& [k, v] : body.items()) out[k] = std::move(v);
  return out;
}

// Writes `text` to the output path or standard output; a file write is
// acknowledged on standard output with the artifact checksum.
void emit_text(Context& ctx, const std::string& text, const std::string& out_path, const std::string& digest) {
  if (out_path.empty()) {
    ctx.out << text;
    return;
  }
  const fs::path p = resolve_output(out_path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  io::write_text_file(p, text);
  ctx.out << json{{"written", p.string()}, {"checksum", digest}}.dump() << "\n";
}

void emit_json(Context& ctx, const json& doc, const std::string& out_path) {
  emit_text(ctx, doc.dump(2) + "\n", out_path, io::checksum(doc));
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// Schema-stamped artifacts keep the owning module's layout; the resolved
// config rides along as an extra field.
json stamp(json doc, const Context& ctx) {
  doc["config"] = ctx.config;
  return doc;
}

// ---------------------------------------------------------------------------
// Subcommand implementations

struct Options {
  std::string spins, file, out, choice, unitary, input, format = "json", postselect, reference, ensemble = "haar";
  std::string spin_sums;
  std::uint64_t shots = 0, seed = 1;
  int rows = 0, cols = 0, sweep = 0, basis_index = 0, c_single = 66;
  bool all = false, use_mesh = false;
  double unitarity_tol = tol::kUnitarity, mesh_tol = tol::kMeshRoundTrip;
};

std::optional<std::uint64_t> shots_opt(const Options& o) {
  return o.shots > 0 ? std::optional<std::uint64_t>(o.shots) : std::nullopt;
}

json gate_summary(const VertexGate& g) {
  json sv = json::array();
  for (double s : g.singular_values()) sv.push_back(s);
  return {{"rows", g.rows()}, {"cols", g.cols()}, {"scale", g.scale}, {"singular_values", sv},
          {"leg_dims", g.leg_dims}};
}

int cmd_su2_dims(Context& ctx, const Options& o) {
  const auto v = parse_int_list(o.spins, "--spins");
  if (v.size() != 4) throw ValidationError("--spins needs four twice-spin integers");
  su2::TetSpins t;
  for (int k = 0; k < 4; ++k) {
    if (v[k] < 0) throw ValidationError("--spins: twice-spins must be non-negative");
    t[k] = su2::Spin(v[k]);
  }
  const auto space = su2::intertwiner_space(t);
  json spins = json::array();
  for (const auto& s : t) spins.push_back(s.str());
  emit_json(ctx, with_header({{"spins", spins}, {"dim", space.dim()}}, ctx), o.out);
  return kExitOk;
}

int cmd_gate_build(Context& ctx, const Options& o) {
  VertexGate g = bf_vertex_gate(parse_face_spins(o.spins));
  if (!o.choice.empty()) g = restrict_gate(g, parse_choice(o.choice));
  emit_json(ctx, stamp(io::gate_to_json(g), ctx), o.out);
  return kExitOk;
}

int cmd_gate_load(Context& ctx, const Options& o) {
  const VertexGate g = io::gate_from_json(io::read_json_file(o.file));
  if (!o.out.empty()) {
    emit_json(ctx, stamp(io::gate_to_json(g), ctx), o.out);
  } else {
    emit_json(ctx, with_header({{"gate", gate_summary(g)}}, ctx), "");
  }
  return kExitOk;
}

int cmd_gate_restrict(Context& ctx, const Options& o) {
  const VertexGate g = io::gate_from_json(io::read_json_file(o.file));
  if (o.all == !o.choice.empty()) throw ValidationError("gate restrict needs exactly one of --choice or --all");
  if (!o.all) {
    emit_json(ctx, stamp(io::gate_to_json(restrict_gate(g, parse_choice(o.choice))), ctx), o.out);
    return kExitOk;
  }
  json gates = json::array();
  for (const auto& c : all_subspace_choices(g)) gates.push_back(io::gate_to_json(restrict_gate(g, c)));
  const auto count = gates.size();
  emit_json(ctx, with_header({{"count", count}, {"gates", std::move(gates)}}, ctx), o.out);
  return kExitOk;
}

int cmd_dilate(Context& ctx, const Options& o) {
  const VertexGate g = io::gate_from_json(io::read_json_file(o.file));
  const DilatedUnitary u = dilate(g);
  const double dev = verify_unitary(u.u);
  if (dev > o.unitarity_tol) {
    throw NumericalError("dilated matrix fails the unitarity check: deviation " + fmt(dev));
  }
  emit_json(ctx, stamp(io::unitary_to_json(u), ctx), o.out);
  return kExitOk;
}

int cmd_mesh_compile(Context& ctx, const Options& o) {
  const DilatedUnitary u = io::unitary_from_json(io::read_json_file(o.file));
  const MziMesh mesh = compile_mesh(u.u, o.mesh_tol);
  const double err = max_abs(reconstruct_unitary(mesh) - u.u);
  if (err > o.mesh_tol) throw NumericalError("mesh round-trip error " + fmt(err) + " exceeds " + fmt(o.mesh_tol));
  emit_json(ctx, stamp(io::mesh_to_json(mesh), ctx), o.out);
  return kExitOk;
}

int cmd_mesh_reconstruct(Context& ctx, const Options& o) {
  const MziMesh mesh = io::mesh_from_json(io::read_json_file(o.file));
  const CMatrix u = reconstruct_unitary(mesh);
  emit_json(ctx, with_header({{"dim", mesh.n_modes}, {"matrix", io::to_json(u)}}, ctx), o.out);
  return kExitOk;
}

int cmd_mesh_stats(Context& ctx, const Options& o) {
  const MziMesh mesh = io::mesh_from_json(io::read_json_file(o.file));
  const MeshStats s = mesh_stats(mesh);
  emit_json(ctx,
            with_header({{"n_modes", mesh.n_modes},
                         {"elements", s.elements},
                         {"nontrivial", s.nontrivial},
                         {"depth", s.depth},
                         {"max_elements", mesh.n_modes * (mesh.n_modes - 1) / 2}},
                        ctx),
            o.out);
  return kExitOk;
}

int cmd_simulate(Context& ctx, const Options& o) {
  const LoadedCircuit c = load_circuit(o.unitary);
  const PhotonState in = parse_input(o.input, c.n_modes());
  PhotonState state = propagate(in, c.circuit());
  std::vector<int> kept;
  if (!o.postselect.empty()) {
    kept = parse_modes(o.postselect, c.n_modes());
    state = postselect_vacuum(state, kept);
  }
  const RVector probs = detection_probabilities(state);

  std::vector<std::uint64_t> counts;
  std::uint64_t kept_shots = 0;
  if (o.shots > 0) {
    // Clicks are drawn from the full detector distribution; clicks outside the
    // kept modes are discarded.
    const PhotonState raw = propagate(in, c.circuit());
    counts = sample_shots(raw, o.shots, o.seed);
    if (!kept.empty()) {
      std::vector<bool> keep(c.n_modes(), false);
      for (int m : kept) keep[m] = true;
      for (int m = 0; m < c.n_modes(); ++m)
        if (!keep[m]) counts[m] = 0;
    }
    for (auto n : counts) kept_shots += n;
  }

  if (o.format == "csv") {
    std::ostringstream csv;
    csv << "mode,count,probability\n";
    for (int m = 0; m < c.n_modes(); ++m) {
      csv << m + 1 << "," << (counts.empty() ? std::string() : std::to_string(counts[m])) << "," << fmt(probs(m))
          << "\n";
    }
    emit_text(ctx, csv.str(), o.out, "");
    return kExitOk;
  }
  json body{{"n_modes", c.n_modes()},
            {"probabilities", std::vector<double>(probs.data(), probs.data() + probs.size())},
            {"amplitudes", io::to_json(state.amplitudes)},
            {"success_probability", state.norm}};
  if (!kept.empty()) body["postselected_modes"] = modes_json(kept);
  if (!counts.empty()) {
    body["shots"] = o.shots;
    body["kept_shots"] = kept_shots;
    body["counts"] = counts;
  }
  emit_json(ctx, with_header(std::move(body), ctx), o.out);
  return kExitOk;
}

json status_json(const TomographyResult& r) {
  json rows = json::array();
  for (const auto& row : r.status) {
    json out = json::array();
    for (auto s : row) {
      out.push_back(s == EntryStatus::kResolved ? "resolved" : s == EntryStatus::kZeroModulus ? "zero_modulus"
                                                                                              : "modulus_only");
    }
    rows.push_back(std::move(out));
  }
  return rows;
}

json matrix_real_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

int cmd_tomography(Context& ctx, const Options& o) {
  const LoadedCircuit c = load_circuit(o.unitary);
  const int rows = o.rows > 0 ? o.rows : c.rows_a();
  const int cols = o.cols > 0 ? o.cols : c.cols_a();
  if (rows < 1 || cols < 1) throw ValidationError("tomography needs --rows and --cols for a mesh file");
  TomographyOptions opt;
  opt.shots = shots_opt(o);
  opt.seed = o.seed;
  const TomographyResult r = tomography_reconstruct(c.circuit(), rows, cols, opt);
  json body{{"rows", rows},
            {"cols", cols},
            {"estimate", io::to_json(r.estimate)},
            {"modulus_stderr", matrix_real_json(r.modulus_stderr)},
            {"status", status_json(r)},
            {"column_modulus_only", r.column_modulus_only},
            {"anchor", {r.anchor_row + 1, r.anchor_col + 1}},
            {"probes", r.probes}};
  if (!o.reference.empty()) {
    const VertexGate g = io::gate_from_json(io::read_json_file(o.reference));
    if (g.rows() != rows || g.cols() != cols) throw ValidationError("reference gate shape differs from the block");
    body["reference_error"] = phase_aligned_error(r.estimate, g.matrix);
  } else if (c.unitary) {
    body["reference_error"] = phase_aligned_error(r.estimate, c.unitary->u.topLeftCorner(rows, cols));
  }
  emit_json(ctx, with_header(std::move(body), ctx), o.out);
  return kExitOk;
}

// Normalized amplitudes on the kept modes after post-selection.
CVector kept_state(const PhotonState& s, const std::vector<int>& kept) {
  CVector v(kept.size());
  for (std::size_t k = 0; k < kept.size(); ++k) v(k) = s.amplitudes(kept[k]);
  return v;
}

std::vector<int> entropy_modes(const LoadedCircuit& c, const std::string& postselect) {
  if (!postselect.empty()) return parse_modes(postselect, c.n_modes());
  if (c.rows_a() < 1) throw ValidationError("entropy on a mesh file needs --postselect");
  return mode_range(0, c.rows_a() - 1);
}

std::string subset_label(ModeMask m, const std::vector<int>& kept) {
  std::vector<int> modes;
  for (int i : mask_modes(m)) modes.push_back(kept[i]);
  return modes_label(modes);
}

// Input ensembles for entropy sweeps. "haar" draws uniformly random inputs on
// the gate's input modes; "preimage" draws the input whose post-selected output
// rotates from the first kept mode into a random direction, reaching localized
// and spread outputs alike.
std::vector<PhotonState> sweep_inputs(const LoadedCircuit& c, const std::vector<int>& kept, const Options& o) {
  const int in_modes = c.cols_a() > 0 ? c.cols_a() : c.n_modes();
  std::mt19937_64 rng(o.seed);
  std::normal_distribution<double> gauss;
  auto random_vec = [&](int n) {
    CVector v(n);
    for (int i = 0; i < n; ++i) v(i) = cd(gauss(rng), gauss(rng));
    return CVector(v.normalized());
  };
  std::vector<PhotonState> out;
  if (o.ensemble == "haar") {
    for (int k = 0; k < o.sweep; ++k) {
      PhotonState s{CVector::Zero(c.n_modes())};
      s.amplitudes.head(in_modes) = random_vec(in_modes);
      out.push_back(std::move(s));
    }
    return out;
  }
  if (o.ensemble != "preimage") throw ValidationError("--ensemble must be haar or preimage");
  const CMatrix u = c.dense();
  CMatrix a(kept.size(), in_modes);
  for (std::size_t r = 0; r < kept.size(); ++r) a.row(r) = u.row(kept[r]).head(in_modes);
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.rank() < static_cast<Eigen::Index>(kept.size())) {
    throw ValidationError("preimage ensemble needs the kept block to have full row rank");
  }
  std::uniform_real_distribution<double> angle(0.0, std::acos(-1.0) / 2);
  const int n = static_cast<int>(kept.size());
  for (int k = 0; k < o.sweep; ++k) {
    CVector dir = random_vec(n);
    dir(0) = 0;
    if (dir.norm() > 0) dir.normalize();
    const double t = angle(rng);
    const CVector y = std::cos(t) * CVector::Unit(n, 0) + std::sin(t) * dir;
    PhotonState s{CVector::Zero(c.n_modes())};
    s.amplitudes.head(in_modes) = svd.solve(y).normalized();
    out.push_back(std::move(s));
  }
  return out;
}

int cmd_entropy(Context& ctx, const Options& o) {
  const LoadedCircuit c = load_circuit(o.unitary);
  const std::vector<int> kept = entropy_modes(c, o.postselect);
  if (kept.size() < 2) throw ValidationError("entropy needs at least two kept modes");

  if (o.sweep > 0) {
    const auto inputs = sweep_inputs(c, kept, o);
    json samples = json::array();
    std::ostringstream csv;
    csv << "sample,max_entropy,subset,success_probability\n";
    double lo = 1.0, hi = 0.0;
    for (std::size_t k = 0; k < inputs.size(); ++k) {
      const PhotonState s = postselect_vacuum(propagate(inputs[k], c.circuit()), kept);
      const auto best = max_bipartition_entropy(kept_state(s, kept));
      lo = std::min(lo, best.entropy);
      hi = std::max(hi, best.entropy);
      samples.push_back({{"max_entropy", best.entropy}, {"subset", subset_label(best.subset, kept)},
                         {"success_probability", s.norm}});
      csv << k + 1 << "," << fmt(best.entropy) << "," << subset_label(best.subset, kept) << "," << fmt(s.norm) << "\n";
    }
    if (o.format == "csv") {
      emit_text(ctx, csv.str(), o.out, "");
    } else {
      emit_json(ctx,
                with_header({{"kept_modes", modes_json(kept)}, {"samples", samples}, {"min_entropy", lo},
                             {"max_entropy", hi}},
                            ctx),
                o.out);
    }
    return kExitOk;
  }

  if (o.input.empty()) throw ValidationError("entropy needs --input or --sweep");
  const PhotonState s = postselect_vacuum(propagate(parse_input(o.input, c.n_modes()), c.circuit()), kept);
  const CVector v = kept_state(s, kept);
  const auto all = bipartition_entropies(v);
  const auto best = max_bipartition_entropy(v);
  if (o.format == "csv") {
    std::ostringstream csv;
    csv << "subset,entropy\n";
    for (const auto& e : all) csv << subset_label(e.subset, kept) << "," << fmt(e.entropy) << "\n";
    emit_text(ctx, csv.str(), o.out, "");
    return kExitOk;
  }
  json per = json::array();
  for (const auto& e : all) per.push_back({{"subset", subset_label(e.subset, kept)}, {"entropy", e.entropy}});
  emit_json(ctx,
            with_header({{"kept_modes", modes_json(kept)},
                         {"success_probability", s.norm},
                         {"bipartitions", per},
                         {"max", {{"subset", subset_label(best.subset, kept)}, {"entropy", best.entropy}}}},
                        ctx),
            o.out);
  return kExitOk;
}

io::FoamFile load_foam(const std::string& path) {
  return io::foam_from_json(io::read_json_file(path), fs::path(path).parent_path());
}

json leg_list(const std::vector<LegRef>& legs) {
  json out = json::array();
  for (const auto& l : legs) out.push_back({l.vertex, l.leg});
  return out;
}

FoamBoundary foam_boundary(const io::FoamFile& f, const Options& o) {
  return f.boundary ? *f.boundary : basis_boundary(f.graph, o.basis_index);
}

json complex_json(cd z) { return json::array({z.real(), z.imag()}); }

int cmd_foam_validate(Context& ctx, const Options& o) {
  const auto f = load_foam(o.file);
  emit_json(ctx,
            with_header({{"valid", true},
                         {"vertices", f.graph.vertices.size()},
                         {"edges", f.graph.edges.size()},
                         {"acyclic", f.graph.acyclic},
                         {"topological_order", f.graph.topological_order},
                         {"open_inputs", leg_list(f.graph.open_inputs)},
                         {"open_outputs", leg_list(f.graph.open_outputs)},
                         {"has_boundary", f.boundary.has_value()}},
                        ctx),
            o.out);
  return kExitOk;
}

int cmd_foam_contract(Context& ctx, const Options& o) {
  const auto f = load_foam(o.file);
  const cd a = contract_amplitude(f.graph, foam_boundary(f, o));
  emit_json(ctx, with_header({{"amplitude", complex_json(a)}, {"modulus", std::abs(a)}}, ctx), o.out);
  return kExitOk;
}

int cmd_foam_simulate(Context& ctx, const Options& o) {
  const auto f = load_foam(o.file);
  const FoamBoundary b = foam_boundary(f, o);
  SimulationOptions opt;
  opt.shots = shots_opt(o);
  opt.seed = o.seed;
  opt.use_mesh = o.use_mesh;
  const SimulationResult r = simulate_amplitude(f.graph, b, opt);
  json body{{"amplitude", complex_json(r.amplitude)},
            {"phase_resolved", r.phase_resolved},
            {"amplitude_stderr", r.amplitude_stderr},
            {"chip_success", r.chip_success},
            {"success_probability", r.success_probability},
            {"projection_probability", r.projection_probability}};
  if (!opt.shots) {
    const cd ref = contract_amplitude(f.graph, b);
    body["contraction"] = complex_json(ref);
    body["relative_deviation"] = std::abs(r.amplitude - ref) / std::max(std::abs(ref), 1e-300);
  }
  emit_json(ctx, with_header(std::move(body), ctx), o.out);
  return kExitOk;
}

int cmd_foam_complexity(Context& ctx, const Options& o) {
  const auto f = load_foam(o.file);
  std::vector<int> sums;
  if (!o.spin_sums.empty()) sums = parse_int_list(o.spin_sums, "--spin-sums");
  const auto est = complexity_bound(f.graph, o.c_single, sums);
  emit_json(ctx,
            with_header({{"c_single", est.c_single},
                         {"n_vertices", est.n_vertices},
                         {"m_factors", est.m_factors},
                         {"j_factors", est.j_factors},
                         {"bound", est.bound.str()}},
                        ctx),
            o.out);
  return kExitOk;
}

int cmd_pipeline(Context& ctx, const Options& o) {
  if (o.spins.empty() == o.file.empty()) throw ValidationError("pipeline needs exactly one of --spins or --gate");
  VertexGate gate = o.file.empty() ? bf_vertex_gate(parse_face_spins(o.spins))
                                   : io::gate_from_json(io::read_json_file(o.file));
  if (!o.choice.empty()) gate = restrict_gate(gate, parse_choice(o.choice));
  const json gate_doc = io::gate_to_json(gate);

  const DilatedUnitary u = dilate(gate);
  const double unitarity = verify_unitary(u.u);
  if (unitarity > o.unitarity_tol) throw NumericalError("dilated matrix fails the unitarity check: " + fmt(unitarity));

  const MziMesh mesh = compile_mesh(u.u, o.mesh_tol);
  const double round_trip = max_abs(reconstruct_unitary(mesh) - u.u);
  if (round_trip > o.mesh_tol) throw NumericalError("mesh round-trip error " + fmt(round_trip));
  const MeshStats stats = mesh_stats(mesh);

  const std::vector<int> kept = mode_range(0, u.rows_a - 1);
  const PhotonState in = parse_input(o.input, u.dim());
  const PhotonState dense = postselect_vacuum(propagate(in, u), kept);
  const PhotonState optical = postselect_vacuum(propagate(in, mesh), kept);
  const CVector direct = gate.matrix * in.amplitudes.head(u.cols_a);
  json sim{{"input", o.input},
           {"success_probability", dense.norm},
           {"gate_norm_squared", direct.squaredNorm()},
           {"mesh_vs_dense_deviation", (dense.amplitudes - optical.amplitudes).cwiseAbs().maxCoeff()},
           {"output_state", io::to_json(CVector(kept_state(dense, kept)))}};
  if (o.shots > 0) {
    const auto counts = sample_shots(propagate(in, mesh), o.shots, o.seed);
    std::uint64_t k = 0;
    for (int m : kept) k += counts[m];
    sim["shots"] = o.shots;
    sim["kept_shots"] = k;
    sim["counts"] = counts;
  }

  TomographyOptions topt;
  topt.shots = shots_opt(o);
  topt.seed = o.seed;
  const TomographyResult tomo = tomography_reconstruct(mesh, u.rows_a, u.cols_a, topt);
  int flagged = 0;
  for (const auto& row : tomo.status)
    for (auto s : row) flagged += s != EntryStatus::kResolved;

  json ent;
  if (kept.size() >= 2) {
    const auto best = max_bipartition_entropy(kept_state(dense, kept));
    ent = {{"max_entropy", best.entropy}, {"subset", subset_label(best.subset, kept)}};
    if (o.sweep > 0) {
      LoadedCircuit lc;
      lc.unitary = u;
      const auto inputs = sweep_inputs(lc, kept, o);
      json vals = json::array();
      for (const auto& s : inputs) {
        vals.push_back(max_bipartition_entropy(kept_state(postselect_vacuum(propagate(s, u), kept), kept)).entropy);
      }
      ent["sweep"] = vals;
    }
  }

  json report{{"gate",
               {{"rows", gate.rows()}, {"cols", gate.cols()}, {"scale", gate.scale},
                {"max_singular_value", gate.singular_values()(0)}, {"checksum", io::checksum(gate_doc)}}},
              {"dilation",
               {{"dim", u.dim()}, {"unitarity_deviation", unitarity},
                {"checksum", io::checksum(io::unitary_to_json(u))}}},
              {"mesh",
               {{"elements", stats.elements}, {"nontrivial", stats.nontrivial}, {"depth", stats.depth},
                {"round_trip_error", round_trip}, {"checksum", io::checksum(io::mesh_to_json(mesh))}}},
              {"simulation", sim},
              {"tomography",
               {{"reconstruction_error", phase_aligned_error(tomo.estimate, gate.matrix)},
                {"probes", tomo.probes},
                {"flagged_entries", flagged},
                {"checksum", io::checksum(io::to_json(tomo.estimate))}}},
              {"entanglement", ent}};
  emit_json(ctx, with_header(std::move(report), ctx), o.out);
  return kExitOk;
}

// ---------------------------------------------------------------------------

void write_error(std::ostream& err, const std::string& kind, const std::string& message) {
  err << json{{"error", {{"type", kind}, {"message", message}}}}.dump() << "\n";
}

// Every option of the selected subcommand chain with its resolved value.
json resolved_config(const CLI::App& app) {
  json cfg = json::object();
  std::string path;
  const CLI::App* cur = &app;
  while (true) {
    for (const CLI::Option* opt : cur->get_options()) {
      if (opt->get_name() == "--help" || opt->get_name() == "-h" || opt->get_name() == "--version") continue;
      std::string key = opt->get_single_name();
      while (!key.empty() && key.front() == '-') key.erase(key.begin());
      if (key.empty()) continue;
      if (!opt->results().empty()) {
        cfg[key] = opt->results().size() == 1 ? json(opt->results()[0]) : json(opt->results());
      } else if (!opt->get_default_str().empty()) {
        cfg[key] = opt->get_default_str();
      }
    }
    const auto subs = cur->get_subcommands();
    if (subs.empty()) break;
    cur = subs.front();
    path += (path.empty() ? "" : " ") + cur->get_name();
  }
  cfg["command"] = path;
  return cfg;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"lqgsim: linear-optical simulator for spinfoam vertex amplitudes", "lqgsim"};
  app.set_version_flag("--version", "lqgsim 0.1.0");
  app.require_subcommand(1);
  Options o;
  using Handler = int (*)(Context&, const Options&);
  Handler handler = nullptr;

  auto seed_opt = [&](CLI::App* s) { s->add_option("--seed", o.seed, "RNG seed")->capture_default_str(); };
  auto shots_flag = [&](CLI::App* s) {
    s->add_option("--shots", o.shots, "number of detected photons (0: exact probabilities)")->capture_default_str();
  };
  auto out_opt = [&](CLI::App* s) { s->add_option("-o,--output", o.out, "output file (default: standard output)"); };
  auto on = [&](CLI::App* s, Handler h) { s->callback([&handler, h] { handler = h; }); };

  auto* su2 = app.add_subcommand("su2", "SU(2) intertwiner utilities");
  su2->require_subcommand(1);
  auto* dims = su2->add_subcommand("dims", "intertwiner dimension for four twice-spins");
  dims->add_option("--spins", o.spins, "a,b,c,d twice-spins")->required();
  out_opt(dims);
  on(dims, cmd_su2_dims);

  auto* gate = app.add_subcommand("gate", "vertex gates");
  gate->require_subcommand(1);
  auto* build = gate->add_subcommand("build", "BF vertex gate from ten face twice-spins");
  build->add_option("--spins", o.spins, "ten face twice-spins, faces (1,2),(1,3),...,(4,5)")->required();
  build->add_option("--choice", o.choice, "optional subspace restriction, e.g. +,-,+,-,+");
  out_opt(build);
  on(build, cmd_gate_build);
  auto* load = gate->add_subcommand("load", "validate a gate file and report its singular values");
  load->add_option("file", o.file, "gate JSON")->required();
  out_opt(load);
  on(load, cmd_gate_load);
  auto* restrict = gate->add_subcommand("restrict", "restrict a gate to qubit subspaces");
  restrict->add_option("file", o.file, "gate JSON")->required();
  restrict->add_option("--choice", o.choice, "subspace choice, e.g. +,-,+,-,+ or 1,2,1,2,1");
  restrict->add_flag("--all", o.all, "emit every restricted gate");
  out_opt(restrict);
  on(restrict, cmd_gate_restrict);

  auto* dil = app.add_subcommand("dilate", "embed a gate in a unitary");
  dil->add_option("file", o.file, "gate JSON")->required();
  dil->add_option("--unitarity-tol", o.unitarity_tol, "maximum |U^+U - I|")->capture_default_str();
  out_opt(dil);
  on(dil, cmd_dilate);

  auto* mesh = app.add_subcommand("mesh", "MZI meshes");
  mesh->require_subcommand(1);
  auto* compile = mesh->add_subcommand("compile", "rectangular MZI decomposition of a unitary");
  compile->add_option("file", o.file, "unitary JSON")->required();
  compile->add_option("--tol", o.mesh_tol, "unitarity and round-trip tolerance")->capture_default_str();
  out_opt(compile);
  on(compile, cmd_mesh_compile);
  auto* recon = mesh->add_subcommand("reconstruct", "multiply a mesh back into a matrix");
  recon->add_option("file", o.file, "mesh JSON")->required();
  out_opt(recon);
  on(recon, cmd_mesh_reconstruct);
  auto* stats = mesh->add_subcommand("stats", "element count and depth");
  stats->add_option("file", o.file, "mesh JSON")->required();
  out_opt(stats);
  on(stats, cmd_mesh_stats);

  auto* sim = app.add_subcommand("simulate", "single-photon propagation");
  sim->add_option("--unitary", o.unitary, "unitary or mesh JSON")->required();
  sim->add_option("--input", o.input, "basis:j, super:j,j'[,chi] or a state file")->required();
  sim->add_option("--postselect", o.postselect, "kept modes, e.g. 1-4");
  sim->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  shots_flag(sim);
  seed_opt(sim);
  out_opt(sim);
  on(sim, cmd_simulate);

  auto* tomo = app.add_subcommand("tomography", "reconstruct a block of the unitary from detection statistics");
  tomo->add_option("--unitary", o.unitary, "unitary or mesh JSON")->required();
  tomo->add_option("--rows", o.rows, "block rows (default: gate rows)");
  tomo->add_option("--cols", o.cols, "block columns (default: gate columns)");
  tomo->add_option("--reference", o.reference, "gate JSON to compare against");
  shots_flag(tomo);
  seed_opt(tomo);
  out_opt(tomo);
  on(tomo, cmd_tomography);

  auto* ent = app.add_subcommand("entropy", "bipartition entropies of the post-selected output");
  ent->add_option("--unitary", o.unitary, "unitary or mesh JSON")->required();
  ent->add_option("--input", o.input, "basis:j, super:j,j'[,chi] or a state file");
  ent->add_option("--postselect", o.postselect, "kept modes (default: the gate's output modes)");
  ent->add_option("--sweep", o.sweep, "number of random inputs");
  ent->add_option("--ensemble", o.ensemble, "sweep ensemble: haar or preimage")->capture_default_str();
  ent->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  seed_opt(ent);
  out_opt(ent);
  on(ent, cmd_entropy);

  auto* foam = app.add_subcommand("foam", "spinfoam networks");
  foam->require_subcommand(1);
  auto foam_common = [&](CLI::App* s) {
    s->add_option("file", o.file, "foam JSON")->required();
    out_opt(s);
  };
  auto* fv = foam->add_subcommand("validate", "check gluing and area matching");
  foam_common(fv);
  on(fv, cmd_foam_validate);
  auto* fc = foam->add_subcommand("contract", "tensor-network amplitude");
  foam_common(fc);
  fc->add_option("--basis", o.basis_index, "basis state on every open leg when the file has no boundary");
  on(fc, cmd_foam_contract);
  auto* fs_ = foam->add_subcommand("simulate", "optical chaining of the foam's chips");
  foam_common(fs_);
  fs_->add_option("--basis", o.basis_index, "basis state on every open leg when the file has no boundary");
  fs_->add_flag("--mesh", o.use_mesh, "propagate through compiled MZI meshes");
  shots_flag(fs_);
  seed_opt(fs_);
  on(fs_, cmd_foam_simulate);
  auto* fx = foam->add_subcommand("complexity", "optical element bound");
  foam_common(fx);
  fx->add_option("--c", o.c_single, "MZI count per chip")->capture_default_str();
  fx->add_option("--spin-sums", o.spin_sums, "spin-sum sizes per internal face");
  on(fx, cmd_foam_complexity);

  auto* pipe = app.add_subcommand("pipeline", "gate, dilation, mesh, simulation, tomography and entropy in one run");
  pipe->add_option("--spins", o.spins, "ten face twice-spins");
  pipe->add_option("--gate", o.file, "gate JSON instead of --spins");
  pipe->add_option("--choice", o.choice, "optional subspace restriction");
  pipe->add_option("--input", o.input, "input state")->capture_default_str();
  pipe->add_option("--sweep", o.sweep, "number of random inputs for an entropy sweep");
  pipe->add_option("--ensemble", o.ensemble, "sweep ensemble: haar or preimage")->capture_default_str();
  pipe->add_option("--unitarity-tol", o.unitarity_tol, "maximum |U^+U - I|")->capture_default_str();
  pipe->add_option("--mesh-tol", o.mesh_tol, "mesh round-trip tolerance")->capture_default_str();
  shots_flag(pipe);
  seed_opt(pipe);
  out_opt(pipe);
  on(pipe, cmd_pipeline);
  o.input = "basis:1";

  std::vector<std::string> argv_store{"lqgsim"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    write_error(err, "usage", e.what());
    return kExitValidation;
  }

  Context ctx{out, err};
  try {
    ctx.config = resolved_config(app);
    err << json{{"config", ctx.config}}.dump() << "\n";
    if (handler == nullptr) throw ValidationError("no command given");
    return handler(ctx, o);
  } catch (const NumericalError& e) {
    write_error(err, "numerical", e.what());
    return kExitNumerical;
  } catch (const ValidationError& e) {
    write_error(err, "validation", e.what());
    return kExitValidation;
  } catch (const fs::filesystem_error& e) {
    write_error(err, "io", e.what());
    return kExitValidation;
  } catch (const std::domain_error& e) {
    write_error(err, "validation", e.what());
    return kExitValidation;
  } catch (const nlohmann::json::exception& e) {
    write_error(err, "validation", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    write_error(err, "internal", e.what());
    return kExitNumerical;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace lqgsim::cli
