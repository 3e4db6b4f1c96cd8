#include "srnn/hw_model.hpp"

#include "json_matrix.hpp"

#include <algorithm>
#include <sstream>

namespace srnn {

int CoreConfig::first_row(SourceKind kind, int index) const {
  switch (kind) {
    case SourceKind::input:
      return index * kAxonsPerInput;
    case SourceKind::recurrent:
      return (inputs + index) * kAxonsPerInput;
    case SourceKind::unused:
      break;
  }
  throw InputError("unused axons have no source row");
}

int CoreConfig::reconstructed_weight(SourceKind kind, int index, int neuron) const {
  const int row = first_row(kind, index);
  int w = 0;
  for (int k = 0; k < kAxonsPerInput; ++k)
    if (connectivity[row + k][neuron]) w += axons[row + k].type;
  return w;
}

std::string ConstraintReport::to_string() const {
  if (ok) return "ok";
  std::ostringstream s;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) s << "; ";
    s << violations[i].rule << " (" << violations[i].measured << " > " << violations[i].limit << ")";
  }
  return s.str();
}

ConstraintReport check_constraints(long n_in, long n_hid, long n_bits) {
  ConstraintReport r;
  auto violate = [&r](std::string rule, long measured, long limit) {
    r.ok = false;
    r.violations.push_back({std::move(rule), measured, limit});
  };
  if (n_in < 1) violate("input count must be at least 1", 1 - n_in, 0);
  if (n_hid < 1) violate("hidden count must be at least 1", 1 - n_hid, 0);
  if (n_bits != 1 && n_bits != 2 && n_bits != 4) {
    violate("weight bits must be 1, 2 or 4", n_bits, 4);
    return r;
  }
  if (n_in + n_hid > kCoreAxons / n_bits) violate("fan-in n_in + n_hid", n_in + n_hid, kCoreAxons / n_bits);
  if (n_hid > kCoreNeurons) violate("hidden neurons per core", n_hid, kCoreNeurons);
  return r;
}

CoreConfig build_core(const QuantizedNet& qnet, int threshold, int feedback_delay) {
  if (threshold < 1) throw ConfigError("threshold must be a positive integer");
  if (feedback_delay < 0 || feedback_delay > kMaxDelay) throw ConfigError("delay must be in [0, 15]");
  const auto n_in = static_cast<int>(qnet.inputs());
  const auto n_hid = static_cast<int>(qnet.hidden());
  if (qnet.q_rec.rows() != n_hid || qnet.q_rec.cols() != n_hid)
    throw DimensionError("recurrent weights must be hidden x hidden");
  ConstraintReport report = check_constraints(n_in, n_hid, kAxonsPerInput);
  if (!report.ok) throw MappingError(std::move(report));

  CoreConfig core;
  core.threshold = threshold;
  core.inputs = n_in;
  core.hidden = n_hid;

  auto map_source = [&](SourceKind kind, int index, int delay, auto weight_of) {
    const int row = core.first_row(kind, index);
    for (int k = 0; k < kAxonsPerInput; ++k)
      core.axons[row + k] = {kAxonTypes[k], delay, {kind, index}};
    for (int j = 0; j < n_hid; ++j) {
      const AxonDecomposition d = decompose_axon(weight_of(j));
      for (int k = 0; k < kAxonsPerInput; ++k) core.connectivity[row + k][j] = d.selected[k];
    }
  };
  for (int i = 0; i < n_in; ++i)
    map_source(SourceKind::input, i, 0, [&](int j) { return qnet.q_in(j, i); });
  for (int r = 0; r < n_hid; ++r)
    map_source(SourceKind::recurrent, r, feedback_delay, [&](int j) { return qnet.q_rec(j, r); });
  return core;
}

double estimate_power(long n_cores) {
  if (n_cores < 0 || n_cores > kChipCores)
    throw RangeError("core count must be in [0, 4096], got " + std::to_string(n_cores));
  if (n_cores == kChipCores) return kChipPowerWatts;
  return static_cast<double>(n_cores) * kChipPowerWatts / kChipCores;
}

// Core file layout (version 1):
//
//   srnn-core 1
//   threshold <T>
//   inputs <n_in>
//   hidden <n_hid>
//   axons
//   <row> <type> <delay> <none|in:<i>|rec:<r>>      x 256
//   connectivity
//   <row> <bitmap over the n_hid used neurons>      x 256
//   end
std::string core_to_string(const CoreConfig& core) {
  std::ostringstream s;
  s << "srnn-core 1\n";
  s << "threshold " << core.threshold << "\n";
  s << "inputs " << core.inputs << "\n";
  s << "hidden " << core.hidden << "\n";
  s << "axons\n";
  for (int i = 0; i < kCoreAxons; ++i) {
    const AxonRow& a = core.axons[i];
    s << i << ' ' << a.type << ' ' << a.delay << ' ';
    switch (a.source.kind) {
      case SourceKind::unused: s << "none"; break;
      case SourceKind::input: s << "in:" << a.source.index; break;
      case SourceKind::recurrent: s << "rec:" << a.source.index; break;
    }
    s << '\n';
  }
  s << "connectivity\n";
  for (int i = 0; i < kCoreAxons; ++i) {
    s << i << ' ';
    for (int j = 0; j < core.hidden; ++j) s << (core.connectivity[i][j] ? '1' : '0');
    s << '\n';
  }
  s << "end\n";
  return s.str();
}

CoreConfig core_from_string(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  auto next = [&]() -> std::string {
    if (!std::getline(in, line)) throw ParseError("unexpected end of core file", lineno + 1);
    ++lineno;
    return line;
  };
  auto keyed_int = [&](const std::string& key) {
    std::istringstream ls(next());
    std::string k;
    int v = 0;
    if (!(ls >> k >> v) || k != key) throw ParseError("expected '" + key + " <int>'", lineno);
    return v;
  };

  if (next() != "srnn-core 1") throw ParseError("not a version 1 core file", lineno);
  CoreConfig core;
  core.threshold = keyed_int("threshold");
  core.inputs = keyed_int("inputs");
  core.hidden = keyed_int("hidden");
  if (core.threshold < 1) throw ParseError("threshold must be positive", 3);
  if (core.inputs < 0 || core.hidden < 0 || core.hidden > kCoreNeurons ||
      (core.inputs + core.hidden) * kAxonsPerInput > kCoreAxons)
    throw ParseError("input/hidden counts do not fit a core", 4);

  if (next() != "axons") throw ParseError("expected 'axons'", lineno);
  for (int i = 0; i < kCoreAxons; ++i) {
    std::istringstream ls(next());
    int row = -1;
    AxonRow a;
    std::string src;
    if (!(ls >> row >> a.type >> a.delay >> src) || row != i) throw ParseError("bad axon row", lineno);
    if (std::find(kAxonTypes.begin(), kAxonTypes.end(), a.type) == kAxonTypes.end())
      throw ParseError("axon type must be one of 1, 2, 4, -8", lineno);
    if (a.delay < 0 || a.delay > kMaxDelay) throw ParseError("delay outside [0, 15]", lineno);
    if (src == "none") {
      a.source = {};
    } else if (src.rfind("in:", 0) == 0) {
      a.source = {SourceKind::input, std::stoi(src.substr(3))};
    } else if (src.rfind("rec:", 0) == 0) {
      a.source = {SourceKind::recurrent, std::stoi(src.substr(4))};
    } else {
      throw ParseError("bad axon source '" + src + "'", lineno);
    }
    core.axons[i] = a;
  }
  if (next() != "connectivity") throw ParseError("expected 'connectivity'", lineno);
  for (int i = 0; i < kCoreAxons; ++i) {
    std::istringstream ls(next());
    int row = -1;
    std::string bits;
    ls >> row >> bits;
    if (row != i || static_cast<int>(bits.size()) != core.hidden)
      throw ParseError("bad connectivity row", lineno);
    for (int j = 0; j < core.hidden; ++j) {
      if (bits[j] != '0' && bits[j] != '1') throw ParseError("bitmap must be 0/1", lineno);
      core.connectivity[i][j] = bits[j] == '1';
    }
  }
  if (next() != "end") throw ParseError("expected 'end'", lineno);
  return core;
}

void save_core(const CoreConfig& core, const std::filesystem::path& path) {
  detail::write_text(path, core_to_string(core));
}

CoreConfig load_core(const std::filesystem::path& path) {
  return core_from_string(detail::read_text(path));
}

}  // namespace srnn
