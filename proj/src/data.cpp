#include "lacsh/data.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

#include "lacsh/csv.hpp"
#include "lacsh/error.hpp"

namespace lacsh {

void RawPanel::add(PanelEntry entry) {
  auto key = std::make_tuple(entry.unit, entry.year, entry.variable);
  if (index_.count(key))
    throw DuplicateKeyError("duplicate (unit, year, variable): " + entry.unit + "/" +
                            std::to_string(entry.year) + "/" + entry.variable);
  index_.emplace(std::move(key), entries_.size());
  entries_.push_back(std::move(entry));
}

std::optional<double> RawPanel::value(const std::string& unit, int year,
                                      const std::string& variable) const {
  auto it = index_.find(std::make_tuple(unit, year, variable));
  if (it == index_.end()) return std::nullopt;
  const PanelEntry& e = entries_[it->second];
  if (e.missing) return std::nullopt;
  return e.value;
}

Transform parse_transform(const std::string& name) {
  if (name == "identity") return Transform::identity;
  if (name == "sqrt") return Transform::sqrt_t;
  if (name == "log") return Transform::log_t;
  if (name == "cubic") return Transform::cubic;
  throw ConfigError("unknown transform: " + name);
}

std::string transform_name(Transform t) {
  switch (t) {
    case Transform::identity: return "identity";
    case Transform::sqrt_t: return "sqrt";
    case Transform::log_t: return "log";
    case Transform::cubic: return "cubic";
  }
  return "identity";
}

int UnitsTable::find(const std::string& id) const {
  for (std::size_t i = 0; i < unit_id.size(); ++i)
    if (unit_id[i] == id) return static_cast<int>(i);
  return -1;
}

namespace {

bool is_missing_token(const std::string& s) { return s.empty() || s == "NA"; }

}  // namespace

RawPanel load_panel(const std::string& path, const PanelSchema& schema) {
  CsvTable csv = read_csv(path);
  const int cu = csv.column(schema.unit_col);
  const int cy = csv.column(schema.year_col);
  const int cv = csv.column(schema.var_col);
  const int cval = csv.column(schema.value_col);
  if (cu < 0) throw UnknownColumnError("panel missing column: " + schema.unit_col);
  if (cy < 0) throw UnknownColumnError("panel missing column: " + schema.year_col);
  if (cv < 0) throw UnknownColumnError("panel missing column: " + schema.var_col);
  if (cval < 0) throw UnknownColumnError("panel missing column: " + schema.value_col);
  const std::size_t width = csv.header.size();
  RawPanel panel;
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    const auto& row = csv.rows[r];
    const std::string where = path + " line " + std::to_string(r + 2);
    if (row.size() != width)
      throw MalformedRowError("wrong field count at " + where);
    PanelEntry e;
    e.unit = row[cu];
    e.year = static_cast<int>(parse_long(row[cy], where));
    e.variable = row[cv];
    if (is_missing_token(row[cval])) {
      e.missing = true;
    } else {
      e.value = parse_double(row[cval], where);
    }
    if (e.unit.empty()) throw MalformedRowError("empty unit id at " + where);
    panel.add(std::move(e));
  }
  return panel;
}

UnitsTable load_units(const std::string& path) {
  CsvTable csv = read_csv(path);
  const int cid = csv.column("unit_id");
  const int cname = csv.column("name");
  const int cgroup = csv.column("income_group");
  const int clat = csv.column("lat");
  const int clon = csv.column("lon");
  if (cid < 0 || cname < 0 || cgroup < 0 || clat < 0 || clon < 0)
    throw UnknownColumnError("units file needs unit_id,name,income_group,lat,lon: " + path);
  UnitsTable units;
  std::set<std::string> seen;
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    const auto& row = csv.rows[r];
    const std::string where = path + " line " + std::to_string(r + 2);
    if (row.size() != csv.header.size())
      throw MalformedRowError("wrong field count at " + where);
    if (!seen.insert(row[cid]).second)
      throw DuplicateKeyError("duplicate unit id: " + row[cid]);
    const double lat = parse_double(row[clat], where);
    const double lon = parse_double(row[clon], where);
    if (lat < -90.0 || lat > 90.0 || lon <= -180.0 || lon > 180.0)
      throw InvalidCoordinateError("coordinates out of range at " + where);
    units.unit_id.push_back(row[cid]);
    units.name.push_back(row[cname]);
    units.income_group.push_back(row[cgroup]);
    units.lat.push_back(lat);
    units.lon.push_back(lon);
  }
  return units;
}

RawPanel apply_transforms(const RawPanel& panel, const std::vector<TransformSpec>& specs) {
  std::map<std::string, TransformSpec> by_var;
  for (const auto& s : specs) by_var[s.variable] = s;
  RawPanel out;
  for (PanelEntry e : panel.entries()) {
    auto it = by_var.find(e.variable);
    if (it != by_var.end() && !e.missing) {
      const TransformSpec& s = it->second;
      const std::string where = e.unit + "/" + std::to_string(e.year) + "/" + e.variable;
      switch (s.transform) {
        case Transform::identity:
          break;
        case Transform::sqrt_t:
          if (e.value < 0.0) throw DomainError("sqrt of negative value at " + where);
          e.value = std::sqrt(e.value);
          break;
        case Transform::log_t:
          if (e.value <= 0.0) throw DomainError("log of nonpositive value at " + where);
          e.value = std::log(e.value);
          break;
        case Transform::cubic:
          e.value = e.value * e.value * e.value;
          break;
      }
      if (s.reversed) e.value = -e.value;
    }
    out.add(std::move(e));
  }
  return out;
}

std::map<std::pair<std::string, std::string>, AveragedValue> average_panel(
    const RawPanel& panel, int first_year, int last_year,
    const std::vector<std::string>& units, const std::vector<std::string>& variables) {
  std::map<std::pair<std::string, std::string>, AveragedValue> out;
  for (const auto& unit : units) {
    for (const auto& var : variables) {
      double sum = 0.0;
      int count = 0;
      for (int year = first_year; year <= last_year; ++year) {
        if (auto v = panel.value(unit, year, var)) {
          sum += *v;
          ++count;
        }
      }
      if (count == 0)
        throw AllMissingError("no observed value for " + unit + "/" + var +
                              " in years " + std::to_string(first_year) + "-" +
                              std::to_string(last_year));
      out[{unit, var}] = {sum / count, count};
    }
  }
  return out;
}

std::vector<Standardization> standardize(MatrixXd& columns,
                                         const std::vector<std::string>& names) {
  const int n = static_cast<int>(columns.rows());
  const int k = static_cast<int>(columns.cols());
  std::vector<Standardization> log;
  log.reserve(k);
  for (int j = 0; j < k; ++j) {
    const double mean = columns.col(j).mean();
    const double var = (columns.col(j).array() - mean).square().sum() / n;
    const std::string name = (j < static_cast<int>(names.size())) ? names[j]
                                                                  : "col" + std::to_string(j);
    if (var <= 0.0) throw ZeroVarianceError("zero variance column: " + name);
    const double sd = std::sqrt(var);
    columns.col(j) = (columns.col(j).array() - mean) / sd;
    log.push_back({name, mean, sd});
  }
  return log;
}

double pearson_correlation(const VectorXd& x, const VectorXd& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw LengthMismatchError("correlation: mismatched or tiny vectors");
  const double mx = x.mean(), my = y.mean();
  Eigen::ArrayXd dx = x.array() - mx, dy = y.array() - my;
  const double sxy = (dx * dy).sum();
  const double sxx = dx.square().sum(), syy = dy.square().sum();
  if (sxx <= 0.0 || syy <= 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

std::pair<std::vector<int>, std::vector<PruneRecord>> prune_collinear(
    const MatrixXd& Xstar, const MatrixXd& Ystar,
    const std::vector<std::string>& xstar_names,
    const std::vector<std::string>& ystar_names, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0))
    throw InvalidParameterError("prune threshold must be in (0, 1]");
  std::vector<int> kept(Ystar.cols());
  for (std::size_t i = 0; i < kept.size(); ++i) kept[i] = static_cast<int>(i);
  std::vector<PruneRecord> records;
  for (;;) {
    double worst = -1.0;
    int worst_pos = -1;  // position within kept
    std::string against;
    for (std::size_t p = 0; p < kept.size(); ++p) {
      const int j = kept[p];
      double best = -1.0;
      std::string best_name;
      for (int c = 0; c < Xstar.cols(); ++c) {
        const double r = std::fabs(pearson_correlation(Ystar.col(j), Xstar.col(c)));
        if (r > best) { best = r; best_name = xstar_names[c]; }
      }
      for (std::size_t p2 = 0; p2 < kept.size(); ++p2) {
        if (p2 == p) continue;
        const double r = std::fabs(pearson_correlation(Ystar.col(j), Ystar.col(kept[p2])));
        if (r > best) { best = r; best_name = ystar_names[kept[p2]]; }
      }
      // ties: prefer the larger column index, so >= when scanning ascending
      if (best >= threshold && best >= worst) {
        worst = best;
        worst_pos = static_cast<int>(p);
        against = best_name;
      }
    }
    if (worst_pos < 0) break;
    records.push_back({ystar_names[kept[worst_pos]], against, worst});
    kept.erase(kept.begin() + worst_pos);
  }
  return {kept, records};
}

MatrixXd Dataset::Zstar() const {
  MatrixXd Z(n(), 1 + k() + q());
  Z.col(0).setOnes();
  if (k() > 0) Z.middleCols(1, k()) = Xstar;
  if (q() > 0) Z.middleCols(1 + k(), q()) = Ystar;
  return Z;
}

MatrixXd Dataset::Wstar() const {
  MatrixXd W(n(), 2 + k() + q());
  W.col(0).setOnes();
  W.col(1) = T;
  if (k() > 0) W.middleCols(2, k()) = Xstar;
  if (q() > 0) W.middleCols(2 + k(), q()) = Ystar;
  return W;
}

void Dataset::validate() const {
  const int N = n();
  if (N < 3) throw DatasetInvariantError("need at least 3 units");
  if (p() < 1) throw DatasetInvariantError("need at least 1 metric");
  if (q() >= p()) throw DatasetInvariantError("lagged metrics must satisfy Q < P");
  if (T.size() != N || static_cast<int>(coords.size()) != N ||
      static_cast<int>(unit_ids.size()) != N || Xstar.rows() != N || Ystar.rows() != N)
    throw DatasetInvariantError("row count mismatch across dataset fields");
  if (anchor_index < 0 || anchor_index >= N)
    throw DatasetInvariantError("anchor index out of range");
  for (const auto& [lat, lon] : coords) {
    if (lat < -90.0 || lat > 90.0 || lon <= -180.0 || lon > 180.0)
      throw InvalidCoordinateError("unit coordinate out of range");
  }
  if (standardized) {
    auto check = [&](const MatrixXd& M, const std::string& what) {
      for (int j = 0; j < M.cols(); ++j) {
        const double mean = M.col(j).mean();
        const double sd = std::sqrt((M.col(j).array() - mean).square().sum() / N);
        if (std::fabs(mean) >= 1e-9 || std::fabs(sd - 1.0) >= 1e-9)
          throw DatasetInvariantError(what + " column " + std::to_string(j) +
                                      " not standardized");
      }
    };
    check(Y, "Y");
    check(Xstar, "Xstar");
    check(Ystar, "Ystar");
    MatrixXd t = T;
    check(t, "T");
    // no remaining collinearity at the pruning threshold
    for (int j = 0; j < q(); ++j) {
      for (int c = 0; c < k(); ++c)
        if (std::fabs(pearson_correlation(Ystar.col(j), Xstar.col(c))) >= 0.8)
          throw DatasetInvariantError("Ystar/Xstar correlation >= 0.8 after pruning");
      for (int j2 = j + 1; j2 < q(); ++j2)
        if (std::fabs(pearson_correlation(Ystar.col(j), Ystar.col(j2))) >= 0.8)
          throw DatasetInvariantError("Ystar pair correlation >= 0.8 after pruning");
    }
  }
}

Dataset assemble_dataset(const RawPanel& raw, const UnitsTable& units,
                         const DatasetRoles& roles,
                         const std::vector<TransformSpec>& transforms) {
  RawPanel panel = apply_transforms(raw, transforms);
  const int P = static_cast<int>(roles.metrics.size());
  const int K = static_cast<int>(roles.covariates.size());

  // keep units that have every modeled value; log the rest
  std::vector<int> keep;
  std::vector<DroppedUnit> dropped;
  for (std::size_t u = 0; u < units.unit_id.size(); ++u) {
    const std::string& id = units.unit_id[u];
    std::string reason;
    for (const auto& m : roles.metrics) {
      if (!panel.value(id, roles.current_year, m)) {
        reason = "missing metric " + m + " in " + std::to_string(roles.current_year);
        break;
      }
    }
    if (reason.empty() && !panel.value(id, roles.treatment_year, roles.treatment))
      reason = "missing treatment " + roles.treatment + " in " +
               std::to_string(roles.treatment_year);
    auto has_lag = [&](const std::string& var) {
      for (int y = roles.lag_start; y <= roles.lag_end; ++y)
        if (panel.value(id, y, var)) return true;
      return false;
    };
    if (reason.empty()) {
      for (const auto& c : roles.covariates)
        if (!has_lag(c)) { reason = "no lagged values for covariate " + c; break; }
    }
    if (reason.empty()) {
      for (const auto& m : roles.lagged_metrics)
        if (!has_lag(m)) { reason = "no lagged values for metric " + m; break; }
    }
    if (reason.empty()) {
      keep.push_back(static_cast<int>(u));
    } else {
      dropped.push_back({id, reason});
    }
  }
  const int N = static_cast<int>(keep.size());
  if (N < 3) throw DatasetInvariantError("fewer than 3 complete units after drops");

  Dataset data;
  data.dropped_units = std::move(dropped);
  data.metric_names = roles.metrics;
  data.covariate_names = roles.covariates;
  data.treatment_name = roles.treatment;
  data.unit_ids.reserve(N);
  for (int idx : keep) {
    data.unit_ids.push_back(units.unit_id[idx]);
    data.unit_names.push_back(units.name[idx]);
    data.income_group.push_back(units.income_group[idx]);
    data.coords.emplace_back(units.lat[idx], units.lon[idx]);
  }
  data.anchor_index = -1;
  for (int i = 0; i < N; ++i)
    if (data.unit_ids[i] == roles.anchor_unit) data.anchor_index = i;
  if (data.anchor_index < 0)
    throw DatasetInvariantError("anchor unit '" + roles.anchor_unit +
                                "' not among complete units");

  data.Y.resize(N, P);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < P; ++j)
      data.Y(i, j) = *panel.value(data.unit_ids[i], roles.current_year, roles.metrics[j]);
  data.T.resize(N);
  for (int i = 0; i < N; ++i)
    data.T[i] = *panel.value(data.unit_ids[i], roles.treatment_year, roles.treatment);

  auto lag_means = average_panel(panel, roles.lag_start, roles.lag_end, data.unit_ids,
                                 [&] {
                                   std::vector<std::string> vars = roles.covariates;
                                   vars.insert(vars.end(), roles.lagged_metrics.begin(),
                                               roles.lagged_metrics.end());
                                   return vars;
                                 }());
  data.Xstar.resize(N, K);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < K; ++j)
      data.Xstar(i, j) = lag_means.at({data.unit_ids[i], roles.covariates[j]}).mean;
  MatrixXd ystar_all(N, roles.lagged_metrics.size());
  for (int i = 0; i < N; ++i)
    for (std::size_t j = 0; j < roles.lagged_metrics.size(); ++j)
      ystar_all(i, j) = lag_means.at({data.unit_ids[i], roles.lagged_metrics[j]}).mean;

  auto log_for = [&](MatrixXd& M, const std::vector<std::string>& names,
                     const std::string& prefix) {
    std::vector<std::string> full;
    full.reserve(names.size());
    for (const auto& n : names) full.push_back(prefix + n);
    auto part = standardize(M, full);
    data.standardization_log.insert(data.standardization_log.end(), part.begin(),
                                    part.end());
  };
  log_for(data.Y, roles.metrics, "Y:");
  log_for(data.Xstar, roles.covariates, "Xstar:");
  std::vector<std::string> lag_names = roles.lagged_metrics;
  log_for(ystar_all, lag_names, "Ystar:");
  MatrixXd tcol = data.T;
  log_for(tcol, {roles.treatment}, "T:");
  data.T = tcol;

  auto [kept, records] = prune_collinear(data.Xstar, ystar_all, roles.covariates,
                                         lag_names, roles.prune_threshold);
  data.pruning_log = records;
  data.Ystar.resize(N, kept.size());
  for (std::size_t j = 0; j < kept.size(); ++j) {
    data.Ystar.col(j) = ystar_all.col(kept[j]);
    data.lagged_metric_names.push_back(lag_names[kept[j]]);
  }
  data.validate();
  return data;
}

void write_dataset_csv(const std::string& path, const Dataset& data) {
  CsvTable csv;
  csv.header = {"unit_id", "name", "income_group", "lat", "lon", "T"};
  for (const auto& m : data.metric_names) csv.header.push_back("Y:" + m);
  for (const auto& c : data.covariate_names) csv.header.push_back("Xstar:" + c);
  for (const auto& m : data.lagged_metric_names) csv.header.push_back("Ystar:" + m);
  for (int i = 0; i < data.n(); ++i) {
    std::vector<std::string> row = {data.unit_ids[i], data.unit_names[i],
                                    data.income_group[i], format_double(data.coords[i].first),
                                    format_double(data.coords[i].second),
                                    format_double(data.T[i])};
    for (int j = 0; j < data.p(); ++j) row.push_back(format_double(data.Y(i, j)));
    for (int j = 0; j < data.k(); ++j) row.push_back(format_double(data.Xstar(i, j)));
    for (int j = 0; j < data.q(); ++j) row.push_back(format_double(data.Ystar(i, j)));
    csv.rows.push_back(std::move(row));
  }
  csv.header.push_back("anchor");
  csv.header.push_back("treatment_name");
  csv.header.push_back("standardized");
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    csv.rows[r].push_back(static_cast<int>(r) == data.anchor_index ? "1" : "0");
    csv.rows[r].push_back(r == 0 ? data.treatment_name : "");
    csv.rows[r].push_back(r == 0 ? (data.standardized ? "1" : "0") : "");
  }
  write_csv(path, csv);
}

Dataset read_dataset_csv(const std::string& path) {
  CsvTable csv = read_csv(path);
  Dataset data;
  std::vector<int> ycols, xcols, qcols;
  for (std::size_t c = 0; c < csv.header.size(); ++c) {
    const std::string& h = csv.header[c];
    if (h.rfind("Y:", 0) == 0) {
      ycols.push_back(static_cast<int>(c));
      data.metric_names.push_back(h.substr(2));
    } else if (h.rfind("Xstar:", 0) == 0) {
      xcols.push_back(static_cast<int>(c));
      data.covariate_names.push_back(h.substr(6));
    } else if (h.rfind("Ystar:", 0) == 0) {
      qcols.push_back(static_cast<int>(c));
      data.lagged_metric_names.push_back(h.substr(6));
    }
  }
  const int cid = csv.column("unit_id"), cname = csv.column("name"),
            cgroup = csv.column("income_group"), clat = csv.column("lat"),
            clon = csv.column("lon"), ct = csv.column("T"),
            canchor = csv.column("anchor"), ctn = csv.column("treatment_name"),
            cstd = csv.column("standardized");
  if (cid < 0 || ct < 0 || canchor < 0)
    throw UnknownColumnError("not a dataset csv: " + path);
  const int N = static_cast<int>(csv.rows.size());
  data.Y.resize(N, ycols.size());
  data.Xstar.resize(N, xcols.size());
  data.Ystar.resize(N, qcols.size());
  data.T.resize(N);
  data.anchor_index = -1;
  for (int i = 0; i < N; ++i) {
    const auto& row = csv.rows[i];
    data.unit_ids.push_back(row[cid]);
    data.unit_names.push_back(cname >= 0 ? row[cname] : row[cid]);
    data.income_group.push_back(cgroup >= 0 ? row[cgroup] : "");
    data.coords.emplace_back(parse_double(row[clat], "lat"), parse_double(row[clon], "lon"));
    data.T[i] = parse_double(row[ct], "T");
    for (std::size_t j = 0; j < ycols.size(); ++j)
      data.Y(i, j) = parse_double(row[ycols[j]], "Y");
    for (std::size_t j = 0; j < xcols.size(); ++j)
      data.Xstar(i, j) = parse_double(row[xcols[j]], "Xstar");
    for (std::size_t j = 0; j < qcols.size(); ++j)
      data.Ystar(i, j) = parse_double(row[qcols[j]], "Ystar");
    if (row[canchor] == "1") data.anchor_index = i;
    if (i == 0 && ctn >= 0) data.treatment_name = row[ctn];
    if (i == 0 && cstd >= 0) data.standardized = (row[cstd] == "1");
  }
  if (data.anchor_index < 0) throw DatasetInvariantError("dataset csv lacks anchor row");
  data.validate();
  return data;
}

void write_dataset_audit(const std::string& out_dir, const Dataset& data) {
  namespace fs = std::filesystem;
  {
    CsvTable csv;
    csv.header = {"order", "removed", "against", "correlation"};
    for (std::size_t i = 0; i < data.pruning_log.size(); ++i)
      csv.rows.push_back({std::to_string(i + 1), data.pruning_log[i].removed,
                          data.pruning_log[i].against,
                          format_double(data.pruning_log[i].correlation)});
    write_csv((fs::path(out_dir) / "pruning_log.csv").string(), csv);
  }
  {
    CsvTable csv;
    csv.header = {"unit_id", "reason"};
    for (const auto& d : data.dropped_units) csv.rows.push_back({d.unit_id, d.reason});
    write_csv((fs::path(out_dir) / "dropped_units.csv").string(), csv);
  }
  {
    CsvTable csv;
    csv.header = {"column", "mean", "sd"};
    for (const auto& s : data.standardization_log)
      csv.rows.push_back({s.column, format_double(s.mean), format_double(s.sd)});
    write_csv((fs::path(out_dir) / "standardization_log.csv").string(), csv);
  }
}

}  // namespace lacsh
