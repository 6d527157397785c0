#include "revmine/eval.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <set>

namespace revmine {

using nlohmann::json;

SpanPrf SpanPrf::from_counts(std::size_t n_pred, std::size_t n_gold, std::size_t n_correct) {
  SpanPrf s;
  s.n_pred = n_pred;
  s.n_gold = n_gold;
  s.n_correct = n_correct;
  s.precision = n_pred == 0 ? 0.0 : static_cast<double>(n_correct) / static_cast<double>(n_pred);
  s.recall = n_gold == 0 ? 0.0 : static_cast<double>(n_correct) / static_cast<double>(n_gold);
  s.f1 = s.precision + s.recall == 0.0 ? 0.0 : 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

SpanPrf& SpanPrf::operator+=(const SpanPrf& other) {
  *this = from_counts(n_pred + other.n_pred, n_gold + other.n_gold, n_correct + other.n_correct);
  return *this;
}

SpanPrf span_prf(const std::vector<std::vector<Span>>& pred, const std::vector<std::vector<Span>>& gold) {
  if (pred.size() != gold.size()) throw InputError("span_prf: prediction and gold cover different sentences");
  std::size_t n_pred = 0, n_gold = 0, n_correct = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const std::set<Span> g(gold[i].begin(), gold[i].end());
    const std::set<Span> p(pred[i].begin(), pred[i].end());
    n_pred += p.size();
    n_gold += g.size();
    for (const Span& s : p) n_correct += g.count(s);
  }
  return SpanPrf::from_counts(n_pred, n_gold, n_correct);
}

// ---------------------------------------------------------------------------

namespace {

struct Contingency {
  std::map<std::pair<int, int>, double> cells;
  std::map<int, double> rows;
  std::map<int, double> cols;
  double n = 0;
};

Contingency contingency(const Partition& g, const Partition& c) {
  if (g.size() != c.size()) throw InputError("partitions cover different item sets");
  Contingency t;
  for (std::size_t i = 0; i < g.size(); ++i) {
    t.cells[{g[i], c[i]}] += 1;
    t.rows[g[i]] += 1;
    t.cols[c[i]] += 1;
  }
  t.n = static_cast<double>(g.size());
  return t;
}

double choose2(double x) { return x * (x - 1) / 2; }

std::pair<Partition, Partition> align(const KeyedPartition& g, const KeyedPartition& c) {
  if (g.size() != c.size()) throw InputError("partitions cover different item sets");
  Partition pg, pc;
  auto it = c.begin();
  for (const auto& [key, label] : g) {
    if (it->first != key) throw InputError("partitions cover different item sets (at '" + key + "')");
    pg.push_back(label);
    pc.push_back(it->second);
    ++it;
  }
  return {pg, pc};
}

double entropy(const std::map<int, double>& counts, double n) {
  double h = 0.0;
  for (const auto& [_, k] : counts) {
    const double p = k / n;
    h -= p * std::log(p);
  }
  return h;
}

}  // namespace

bool same_partition(const Partition& g, const Partition& c) {
  if (g.size() != c.size()) return false;
  std::map<int, int> fwd, bwd;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto f = fwd.emplace(g[i], c[i]).first;
    const auto b = bwd.emplace(c[i], g[i]).first;
    if (f->second != c[i] || b->second != g[i]) return false;
  }
  return true;
}

double ari(const Partition& g, const Partition& c) {
  const Contingency t = contingency(g, c);
  if (t.n < 2) throw InputError("ari needs at least 2 items");
  double index = 0.0, sum_rows = 0.0, sum_cols = 0.0;
  for (const auto& [_, k] : t.cells) index += choose2(k);
  for (const auto& [_, k] : t.rows) sum_rows += choose2(k);
  for (const auto& [_, k] : t.cols) sum_cols += choose2(k);
  const double expected = sum_rows * sum_cols / choose2(t.n);
  const double max_index = 0.5 * (sum_rows + sum_cols);
  const double denom = max_index - expected;
  if (denom == 0.0) return 1.0;
  return (index - expected) / denom;
}

double ari(const KeyedPartition& g, const KeyedPartition& c) {
  const auto [pg, pc] = align(g, c);
  return ari(pg, pc);
}

double nmi(const Partition& g, const Partition& c) {
  const Contingency t = contingency(g, c);
  if (t.n < 1) throw InputError("nmi needs at least 1 item");
  const double hg = entropy(t.rows, t.n);
  const double hc = entropy(t.cols, t.n);
  if (same_partition(g, c)) return 1.0;
  if (hg == 0.0 || hc == 0.0) return 0.0;
  double mi = 0.0;
  for (const auto& [key, k] : t.cells) {
    const double pij = k / t.n;
    const double pi = t.rows.at(key.first) / t.n;
    const double pj = t.cols.at(key.second) / t.n;
    mi += pij * std::log(pij / (pi * pj));
  }
  return std::clamp(mi / std::sqrt(hg * hc), 0.0, 1.0);
}

double nmi(const KeyedPartition& g, const KeyedPartition& c) {
  const auto [pg, pc] = align(g, c);
  return nmi(pg, pc);
}

// ---------------------------------------------------------------------------

namespace {

json prf_json(const SpanPrf& s) {
  return {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1},
          {"n_pred", s.n_pred},       {"n_gold", s.n_gold}, {"n_correct", s.n_correct}};
}

json point_json(const HyperPoint& p) {
  return {{"learning_rate", p.learning_rate}, {"hidden", p.hidden}, {"token_dim", p.token_dim}, {"epochs", p.epochs}};
}

}  // namespace

json to_json(const EvalReport& r) {
  json out;
  out["overall"] = prf_json(r.overall);
  json apps = json::object();
  for (const auto& [app, s] : r.per_app) apps[app] = prf_json(s);
  out["per_app"] = std::move(apps);
  json folds = json::array();
  for (const auto& f : r.folds) {
    json fj;
    fj["fold"] = f.fold;
    fj["selected"] = point_json(f.selected);
    fj["validation_f1"] = f.validation_f1;
    fj["overall"] = prf_json(f.overall);
    json fa = json::object();
    for (const auto& [app, s] : f.per_app) fa[app] = prf_json(s);
    fj["per_app"] = std::move(fa);
    folds.push_back(std::move(fj));
  }
  out["folds"] = std::move(folds);
  if (r.clustering_overall) {
    json cl;
    cl["overall"] = {{"ari", r.clustering_overall->ari}, {"nmi", r.clustering_overall->nmi}};
    json ca = json::object();
    for (const auto& [app, s] : r.clustering_per_app) ca[app] = {{"ari", s.ari}, {"nmi", s.nmi}};
    cl["per_app"] = std::move(ca);
    out["clustering"] = std::move(cl);
  }
  return out;
}

void print_table(std::ostream& out, const EvalReport& r) {
  std::size_t width = 7;
  for (const auto& [app, _] : r.per_app) width = std::max(width, app.size());
  auto row = [&](const std::string& name, const SpanPrf& s) {
    out << std::left << std::setw(static_cast<int>(width)) << name << std::right << std::fixed
        << std::setprecision(2) << std::setw(10) << s.precision * 100 << std::setw(10) << s.recall * 100
        << std::setw(10) << s.f1 * 100 << '\n';
  };
  out << std::left << std::setw(static_cast<int>(width)) << "App" << std::right << std::setw(10) << "P(%)"
      << std::setw(10) << "R(%)" << std::setw(10) << "F1(%)" << '\n';
  for (const auto& [app, s] : r.per_app) row(app, s);
  row("Overall", r.overall);
  if (r.clustering_overall) {
    auto crow = [&](const std::string& name, const ClusterScores& s) {
      out << std::left << std::setw(static_cast<int>(width)) << name << std::right << std::fixed
          << std::setprecision(3) << std::setw(10) << s.ari << std::setw(10) << s.nmi << '\n';
    };
    out << '\n' << std::left << std::setw(static_cast<int>(width)) << "App" << std::right << std::setw(10)
        << "ARI" << std::setw(10) << "NMI" << '\n';
    for (const auto& [app, s] : r.clustering_per_app) crow(app, s);
    crow("Overall", *r.clustering_overall);
  }
}

std::pair<std::map<std::string, SpanPrf>, SpanPrf> evaluate_spans(const std::vector<LabeledSentence>& data,
                                                                 const Predictor& predict) {
  std::map<std::string, SpanPrf> per_app;
  SpanPrf overall;
  for (const auto& ls : data) {
    const SpanPrf s = span_prf({predict(ls.sentence)}, {ls.spans});
    per_app[ls.sentence.app_name] += s;
    overall += s;
  }
  return {per_app, overall};
}

namespace {

std::vector<LabeledSentence> select(const std::vector<LabeledSentence>& data, const FoldPlan& plan,
                                    const std::function<bool(int)>& keep) {
  std::vector<LabeledSentence> out;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (keep(plan.fold_of[i])) out.push_back(data[i]);
  }
  return out;
}

void add_mean(SpanPrf& acc, const SpanPrf& s) {
  acc.precision += s.precision;
  acc.recall += s.recall;
  acc.f1 += s.f1;
  acc.n_pred += s.n_pred;
  acc.n_gold += s.n_gold;
  acc.n_correct += s.n_correct;
}

void scale(SpanPrf& acc, double k) {
  acc.precision /= k;
  acc.recall /= k;
  acc.f1 /= k;
}

}  // namespace

EvalReport nested_cv(const std::vector<LabeledSentence>& dataset, int n_outer, const std::vector<HyperPoint>& grid,
                     const TrainFn& train_fn, std::uint64_t seed) {
  if (n_outer < 2) throw InputError("nested_cv needs n_outer >= 2");
  if (grid.empty()) throw InputError("nested_cv needs at least one hyperparameter point");
  const FoldPlan plan = make_folds(dataset.size(), n_outer, seed);

  EvalReport report;
  std::map<std::string, int> app_folds;
  for (int k = 0; k < n_outer; ++k) {
    const int v = plan.validation_fold(k);
    const auto test = select(dataset, plan, [&](int f) { return f == k; });
    const auto validation = select(dataset, plan, [&](int f) { return f == v; });
    const auto train = select(dataset, plan, [&](int f) { return f != k && f != v; });
    const std::uint64_t fold_seed = mix_seed(seed, static_cast<std::uint64_t>(k));

    FoldReport fr;
    fr.fold = k;
    double best_f1 = -1.0;
    for (const HyperPoint& point : grid) {
      const Predictor p = train_fn(train, validation, point, fold_seed);
      const double f1 = evaluate_spans(validation, p).second.f1;
      if (f1 > best_f1) {
        best_f1 = f1;
        fr.selected = point;
      }
    }
    fr.validation_f1 = best_f1;
    const auto refit_set = select(dataset, plan, [&](int f) { return f != k; });
    const Predictor refit = train_fn(refit_set, {}, fr.selected, mix_seed(fold_seed, 1));
    std::tie(fr.per_app, fr.overall) = evaluate_spans(test, refit);

    for (const auto& [app, s] : fr.per_app) {
      add_mean(report.per_app[app], s);
      ++app_folds[app];
    }
    add_mean(report.overall, fr.overall);
    report.folds.push_back(std::move(fr));
  }
  for (auto& [app, s] : report.per_app) scale(s, app_folds[app]);
  scale(report.overall, n_outer);
  return report;
}

}  // namespace revmine
