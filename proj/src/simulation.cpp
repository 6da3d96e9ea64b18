#include "clusterability/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "clusterability/random.hpp"
#include "embedded_data.hpp"
#include "parallel.hpp"

namespace clusterability {

namespace {

using nlohmann::json;

// Run indices never reach this substream.
constexpr std::uint64_t kDipNullStream = ~std::uint64_t{0};

// Square-root factor A with A A^T = covariance; rejects non-PSD input.
Eigen::MatrixXd covariance_factor(const Eigen::MatrixXd& covariance) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(covariance);
  if (solver.info() != Eigen::Success) throw UsageError("covariance decomposition failed");
  const auto& eig = solver.eigenvalues();
  const double scale = std::max(1.0, eig.cwiseAbs().maxCoeff());
  if (eig.minCoeff() < -1e-10 * scale) {
    throw UsageError("covariance is not positive semidefinite");
  }
  return solver.eigenvectors() * eig.cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

// Every numeric field is wrapped as {"value": ..., "provenance": "paper"|"calibrated"}.
const json& tagged(const json& field, std::string_view name) {
  if (!field.is_object() || !field.contains("value") || !field.contains("provenance")) {
    throw UsageError("preset field '" + std::string(name) + "' needs value and provenance");
  }
  const auto& p = field.at("provenance");
  if (!p.is_string() || (p != "paper" && p != "calibrated")) {
    throw UsageError("preset field '" + std::string(name) +
                     "' has provenance other than paper/calibrated");
  }
  return field.at("value");
}

Eigen::VectorXd vector_of(const json& v, std::string_view name) {
  if (!v.is_array()) throw UsageError("preset field '" + std::string(name) + "' must be an array");
  Eigen::VectorXd out(static_cast<Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Index>(i)] = v[i].get<double>();
  return out;
}

SimulationSpec parse_spec(const json& j) {
  SimulationSpec spec;
  spec.id = j.at("id").get<std::string>();
  spec.description = j.value("description", "");
  spec.dimension = tagged(j.at("dimension"), "dimension").get<Index>();

  for (const auto& c : j.at("components")) {
    GaussianComponent comp;
    comp.mean = vector_of(tagged(c.at("mean"), "mean"), "mean");
    if (c.contains("covariance_diagonal")) {
      comp.covariance = vector_of(tagged(c.at("covariance_diagonal"), "covariance_diagonal"),
                                  "covariance_diagonal").asDiagonal();
    } else {
      const auto& rows = tagged(c.at("covariance"), "covariance");
      comp.covariance.resize(static_cast<Index>(rows.size()), static_cast<Index>(rows.size()));
      for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto row = vector_of(rows[r], "covariance");
        if (row.size() != comp.covariance.cols()) throw UsageError("covariance must be square");
        comp.covariance.row(static_cast<Index>(r)) = row.transpose();
      }
    }
    comp.size = tagged(c.at("size"), "size").get<Index>();
    spec.components.push_back(std::move(comp));
  }

  if (j.contains("outliers")) {
    for (const auto& o : j.at("outliers")) {
      OutlierSpec out;
      const auto kind = o.at("kind").get<std::string>();
      if (kind == "fixed") {
        out.kind = OutlierSpec::Kind::fixed;
        out.position = vector_of(tagged(o.at("position"), "position"), "position");
      } else if (kind == "offset" || kind == "sampled") {
        out.kind = kind == "offset" ? OutlierSpec::Kind::offset : OutlierSpec::Kind::sampled;
        out.component = o.value("component", Index{0});
        out.multiple = tagged(o.at("multiple"), "multiple").get<double>();
        if (out.kind == OutlierSpec::Kind::offset) {
          out.direction = vector_of(tagged(o.at("direction"), "direction"), "direction");
        }
      } else {
        throw UsageError("unknown outlier kind '" + kind + "'");
      }
      spec.outliers.push_back(std::move(out));
    }
  }
  spec.validate();
  return spec;
}

}  // namespace

Index SimulationSpec::total_points() const {
  Index total = static_cast<Index>(outliers.size());
  for (const auto& c : components) total += c.size;
  return total;
}

void SimulationSpec::validate() const {
  const std::string where = "preset '" + id + "': ";
  if (dimension < 1) throw UsageError(where + "dimension must be positive");
  if (components.empty()) throw UsageError(where + "needs at least one component");
  for (const auto& c : components) {
    if (c.mean.size() != dimension || c.covariance.rows() != dimension ||
        c.covariance.cols() != dimension) {
      throw UsageError(where + "component dimension mismatch");
    }
    if (c.size < 1) throw UsageError(where + "component sizes must be positive");
    if (!c.covariance.isApprox(c.covariance.transpose())) {
      throw UsageError(where + "covariance must be symmetric");
    }
    covariance_factor(c.covariance);
  }
  for (const auto& o : outliers) {
    if (o.kind == OutlierSpec::Kind::fixed) {
      if (o.position.size() != dimension) throw UsageError(where + "outlier dimension mismatch");
      continue;
    }
    if (o.component < 0 || o.component >= static_cast<Index>(components.size())) {
      throw UsageError(where + "outlier refers to a missing component");
    }
    if (o.kind == OutlierSpec::Kind::offset &&
        (o.direction.size() != dimension || o.direction.norm() == 0.0)) {
      throw UsageError(where + "outlier direction must be a nonzero vector of the right size");
    }
  }
  if (total_points() < 4) throw UsageError(where + "needs at least 4 points in total");
}

std::vector<SimulationSpec> parse_presets(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed preset file: ") + e.what());
  }
  std::vector<SimulationSpec> specs;
  try {
    if (doc.value("schema_version", 0) != 1) throw UsageError("unsupported preset schema_version");
    for (const auto& p : doc.at("presets")) specs.push_back(parse_spec(p));
  } catch (const json::exception& e) {
    throw UsageError(std::string("invalid preset file: ") + e.what());
  }
  return specs;
}

std::vector<SimulationSpec> load_presets(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open preset file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_presets(buffer.str());
}

const std::vector<SimulationSpec>& default_presets() {
  static const std::vector<SimulationSpec> presets = parse_presets(detail::kDefaultPresets);
  return presets;
}

const SimulationSpec& find_preset(const std::vector<SimulationSpec>& presets, std::string_view id) {
  for (const auto& p : presets) {
    if (p.id == id) return p;
  }
  std::string msg = "unknown preset '" + std::string(id) + "'; valid ids:";
  for (const auto& p : presets) msg += " " + p.id;
  throw UsageError(msg);
}

DataMatrix generate(const SimulationSpec& spec, RandomSeed seed) {
  spec.validate();
  RandomStream rng(seed);
  const Index d = spec.dimension;
  Eigen::MatrixXd points(spec.total_points(), d);

  std::vector<Eigen::MatrixXd> factors;
  for (const auto& c : spec.components) factors.push_back(covariance_factor(c.covariance));

  Eigen::VectorXd z(d);
  auto draw_normal = [&] {
    for (Index k = 0; k < d; ++k) z[k] = rng.normal();
  };

  Index row = 0;
  for (std::size_t c = 0; c < spec.components.size(); ++c) {
    const auto& comp = spec.components[c];
    for (Index i = 0; i < comp.size; ++i) {
      draw_normal();
      points.row(row++) = (comp.mean + factors[c] * z).transpose();
    }
  }
  for (const auto& o : spec.outliers) {
    if (o.kind == OutlierSpec::Kind::fixed) {
      points.row(row++) = o.position.transpose();
      continue;
    }
    Eigen::VectorXd direction;
    if (o.kind == OutlierSpec::Kind::offset) {
      direction = o.direction.normalized();
    } else {
      do {
        draw_normal();
      } while (z.norm() == 0.0);
      direction = z.normalized();
    }
    const auto c = static_cast<std::size_t>(o.component);
    points.row(row++) =
        (spec.components[c].mean + o.multiple * (factors[c] * direction)).transpose();
  }

  // Fisher-Yates
  for (Index i = points.rows() - 1; i > 0; --i) {
    const auto j = static_cast<Index>(rng.below(static_cast<std::uint64_t>(i + 1)));
    if (i != j) points.row(i).swap(points.row(j));
  }
  return DataMatrix(std::move(points));
}

SimulationSummary run_batch(const SimulationSpec& spec, Index runs, const BatchOptions& opts) {
  if (runs < 1) throw UsageError("run count must be at least 1");
  spec.validate();

  // Every run of a batch has the same sample size, so all runs share one dip
  // null distribution; only the data and the Silverman bootstrap vary per run.
  const RandomSeed dip_null_seed = derive_substream(opts.seed, kDipNullStream);
  DipOptions dip;
  dip.replicates = opts.replicates;
  dip.threads = 1;
  SilvermanOptions silverman;
  silverman.replicates = opts.replicates;
  silverman.threads = 1;

  struct RunVerdicts {
    Verdict dip = Verdict::unclusterable;
    Verdict silverman = Verdict::unclusterable;
  };
  std::vector<RunVerdicts> verdicts(static_cast<std::size_t>(runs));
  detail::parallel_for(verdicts.size(), opts.threads, [&](std::size_t r) {
    const RandomSeed run_seed = derive_substream(opts.seed, r);
    const DataMatrix data = generate(spec, derive_substream(run_seed, 2));
    const auto distances = pairwise_distances(data);
    if (opts.tests.dip) {
      const auto fit = dip_statistic(distances);
      const double p = fit.dip == 0.0 ? 1.0
                                      : dip_pvalue(fit.dip, distances.size(), opts.replicates,
                                                   dip_null_seed, dip);
      verdicts[r].dip = verdict_for(p, opts.alpha);
    }
    if (opts.tests.silverman) {
      const auto result = silverman_pvalue(distances, derive_substream(run_seed, 1), silverman);
      verdicts[r].silverman = verdict_for(result.p_value, opts.alpha);
    }
  });

  SimulationSummary summary;
  summary.id = spec.id;
  summary.runs = runs;
  summary.seed = opts.seed;
  summary.replicates = opts.replicates;
  auto proportion = [&](auto verdict_of) {
    Index hits = 0;
    for (const auto& v : verdicts) hits += verdict_of(v) == Verdict::clusterable ? 1 : 0;
    return double(hits) / double(runs);
  };
  if (opts.tests.dip) {
    summary.proportion_dip = proportion([](const RunVerdicts& v) { return v.dip; });
  }
  if (opts.tests.silverman) {
    summary.proportion_silverman = proportion([](const RunVerdicts& v) { return v.silverman; });
  }
  return summary;
}

}  // namespace clusterability
