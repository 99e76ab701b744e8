#include "curveprox/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "curveprox/center.hpp"
#include "curveprox/frechet.hpp"
#include "curveprox/io.hpp"
#include "curveprox/l2_nn.hpp"
#include "curveprox/linf_nn.hpp"
#include "curveprox/oracles.hpp"
#include "curveprox/translation_nn.hpp"

namespace curveprox::cli {

namespace {

using Clock = std::chrono::steady_clock;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double micros_since(Clock::time_point start) {
  return std::chrono::duration<double, std::micro>(Clock::now() - start).count();
}

std::string quote(const std::string& s) { return nlohmann::json(s).dump(); }

std::string point_json(Point p) { return "[" + format_number(p.x) + "," + format_number(p.y) + "]"; }

/// One JSON object per line, fields in insertion order.
class Record {
 public:
  Record& raw(const char* name, const std::string& value) {
    body_ += body_.empty() ? "{" : ",";
    body_ += quote(name) + ":" + value;
    return *this;
  }
  Record& str(const char* name, const std::string& value) { return raw(name, quote(value)); }
  Record& num(const char* name, double value) { return raw(name, format_number(value)); }
  Record& flag(const char* name, bool value) { return raw(name, value ? "true" : "false"); }
  Record& null(const char* name) { return raw(name, "null"); }
  std::string line() const { return (body_.empty() ? "{" : body_) + "}\n"; }

 private:
  std::string body_;
};

struct Common {
  std::string metric = "linf";
  bool translation = false;
  bool brute = false;
};

Metric checked_metric(const Common& common) {
  const Metric metric = parse_metric(common.metric);
  if (common.translation && metric != Metric::kLinf) {
    throw UsageError("--translation is only available with --metric linf");
  }
  return metric;
}

const Curve& pick(const std::vector<Curve>& curves, const std::string& id, const std::string& file) {
  if (curves.empty()) throw DataError(file + ": no records");
  if (id.empty()) return curves.front();
  for (const Curve& c : curves) {
    if (c.id == id) return c;
  }
  throw DataError(file + ": no record with id '" + id + "'");
}

// dfd ---------------------------------------------------------------------------------

struct DfdOptions {
  Common common;
  std::string first;
  std::string second;
  std::string first_id;
  std::string second_id;
};

void run_dfd(const DfdOptions& o, std::ostream& out) {
  const Metric metric = checked_metric(o.common);
  const auto first_file = load_curves(o.first);
  const auto second_file = load_curves(o.second.empty() ? o.first : o.second);
  const Curve& p = pick(first_file, o.first_id, o.first);
  const Curve& q = pick(second_file, o.second_id, o.second.empty() ? o.first : o.second);
  double d = 0.0;
  if (o.common.translation) {
    if (p.size() != 2 && q.size() != 2) {
      throw DataError("translation distance needs one of the two records to be a segment");
    }
    const bool p_is_segment = p.size() == 2;
    const Segment s = as_segment(p_is_segment ? p : q);
    const Curve& c = p_is_segment ? q : p;
    d = o.common.brute ? oracles::translation_distance_brute(s, c) : translation_distance(s, c);
  } else {
    d = o.common.brute ? oracles::frechet_table(p.vertices, q.vertices, metric)
                       : dfd_dp(p, q, metric);
  }
  out << Record()
             .str("first", p.id)
             .str("second", q.id)
             .num("distance", d)
             .str("metric", std::string(to_string(metric)))
             .flag("translation", o.common.translation)
             .line();
}

// nn ----------------------------------------------------------------------------------

struct NnOptions {
  Common common;
  std::string data;
  std::string queries;
  double epsilon = 0.5;
  std::optional<double> radius;
  std::string direction = "auto";
  bool timing = false;
  unsigned threads = 1;
};

enum class Direction { kSegmentQueries, kCurveQueries };

Direction resolve_direction(const std::string& flag, const std::vector<Curve>& data,
                            const std::vector<Curve>& queries) {
  if (flag == "segment") return Direction::kSegmentQueries;
  if (flag == "curve") return Direction::kCurveQueries;
  auto all = [](const std::vector<Curve>& v, auto pred) { return std::all_of(v.begin(), v.end(), pred); };
  auto two = [](const Curve& c) { return c.size() == 2; };
  auto longer = [](const Curve& c) { return c.size() > 2; };
  if (all(queries, two) && all(data, longer)) return Direction::kSegmentQueries;
  if (all(data, two) && all(queries, longer)) return Direction::kCurveQueries;
  if (all(queries, two)) return Direction::kSegmentQueries;
  if (all(data, two)) return Direction::kCurveQueries;
  throw UsageError("cannot infer the query direction (neither the queries nor the data are all "
                   "segments); pass --direction");
}

std::vector<Segment> to_segments(const std::vector<Curve>& records) {
  std::vector<Segment> out;
  out.reserve(records.size());
  for (const Curve& c : records) out.push_back(as_segment(c));
  return out;
}

using Answer = std::optional<Neighbor>;
using Solver = std::function<Answer(std::size_t)>;

/// Smallest-id item whose distance is at most r.
template <typename Items, typename Dist>
Answer first_within(const Items& items, double r, Dist dist) {
  Answer best;
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (best && items[k].id >= best->id) continue;
    const double d = dist(items[k]);
    if (d <= r) best = Neighbor{k, items[k].id, d};
  }
  return best;
}

Solver segment_solver(const NnOptions& o, Metric metric, const std::vector<Curve>& curves,
                      const std::vector<Segment>& queries,
                      std::vector<std::shared_ptr<const void>>& keep) {
  const bool translation = o.common.translation;
  auto exact = [metric, translation](const Segment& s, const Curve& c) {
    return translation ? translation_distance(s, c) : dfd_segment_curve(s, c, metric).distance;
  };
  if (o.common.brute) {
    return [&, metric, translation](std::size_t k) -> Answer {
      const Segment& s = queries[k];
      if (o.radius) {
        return first_within(curves, *o.radius, [&](const Curve& c) {
          return translation ? oracles::translation_distance_brute(s, c)
                             : oracles::frechet_table(as_curve(s).vertices, c.vertices, metric);
        });
      }
      return oracles::nn_brute(curves, s, metric, translation);
    };
  }
  if (translation) {
    auto index = std::make_shared<const SegmentTranslationIndex>(curves);
    keep.push_back(index);
    return [&, index, exact](std::size_t k) -> Answer {
      if (!o.radius) return index->nearest(queries[k]);
      const auto hit = index->decide(queries[k], *o.radius);
      if (!hit) return std::nullopt;
      return Neighbor{*hit, curves[*hit].id, exact(queries[k], curves[*hit])};
    };
  }
  if (metric == Metric::kLinf) {
    auto index = std::make_shared<const SegmentQueryIndex>(curves);
    keep.push_back(index);
    return [&, index, exact](std::size_t k) -> Answer {
      if (!o.radius) return index->nearest(queries[k]);
      const auto hit = index->decide(queries[k], *o.radius);
      if (!hit) return std::nullopt;
      return Neighbor{*hit, curves[*hit].id, exact(queries[k], curves[*hit])};
    };
  }
  const AnnIndex::Options lazy{0.0};
  if (o.radius) {
    auto index = std::make_shared<const AnnIndex>(curves, o.epsilon, *o.radius, lazy);
    keep.push_back(index);
    return [&, index](std::size_t k) -> Answer {
      const auto hit = index->query(queries[k]);
      if (!hit) return std::nullopt;
      return Neighbor{hit->index, hit->id, hit->distance};
    };
  }
  // The L2 optimum lies in [d, sqrt(2) d] for the exact L∞ optimum d.
  auto linf = std::make_shared<const SegmentQueryIndex>(curves);
  keep.push_back(linf);
  return [&, linf, lazy](std::size_t k) -> Answer {
    const Neighbor coarse = linf->nearest(queries[k]);
    if (coarse.distance == 0.0) return coarse;
    const AnnLadder ladder(curves, o.epsilon, coarse.distance, std::sqrt(2.0) * coarse.distance, lazy);
    return ladder.query(queries[k]);
  };
}

Solver curve_solver(const NnOptions& o, Metric metric, const std::vector<Segment>& segments,
                    const std::vector<Curve>& queries,
                    std::vector<std::shared_ptr<const void>>& keep) {
  const bool translation = o.common.translation;
  auto exact = [metric, translation](const Segment& s, const Curve& c) {
    return translation ? translation_distance(s, c) : dfd_segment_curve(s, c, metric).distance;
  };
  if (o.common.brute) {
    return [&, metric, translation](std::size_t k) -> Answer {
      const Curve& q = queries[k];
      if (o.radius) {
        return first_within(segments, *o.radius, [&](const Segment& s) {
          return translation ? oracles::translation_distance_brute(s, q)
                             : oracles::frechet_table(as_curve(s).vertices, q.vertices, metric);
        });
      }
      return oracles::nn_brute(segments, q, metric, translation);
    };
  }
  if (translation) {
    auto tree = std::make_shared<const SegmentTranslationTree>(segments);
    keep.push_back(tree);
    return [&, tree, exact](std::size_t k) -> Answer {
      if (!o.radius) return tree->nearest(queries[k]);
      const auto hit = tree->decide(queries[k], *o.radius);
      if (!hit) return std::nullopt;
      return Neighbor{*hit, segments[*hit].id, exact(segments[*hit], queries[k])};
    };
  }
  if (metric == Metric::kLinf) {
    auto tree = std::make_shared<const SegmentEndpointTree>(segments);
    keep.push_back(tree);
    return [&, tree, exact](std::size_t k) -> Answer {
      if (!o.radius) return tree->nearest(queries[k]);
      const auto hit = tree->decide(queries[k], *o.radius);
      if (!hit) return std::nullopt;
      return Neighbor{*hit, segments[*hit].id, exact(segments[*hit], queries[k])};
    };
  }
  auto kgon = std::make_shared<const KgonIndex>(segments, o.epsilon);
  keep.push_back(kgon);
  return [&, kgon, exact](std::size_t k) -> Answer {
    if (!o.radius) return kgon->nearest(queries[k]);
    const auto hit = kgon->decide(queries[k], *o.radius);
    if (!hit) return std::nullopt;
    return Neighbor{*hit, segments[*hit].id, exact(segments[*hit], queries[k])};
  };
}

void run_nn(const NnOptions& o, std::ostream& out) {
  const Metric metric = checked_metric(o.common);
  if (metric == Metric::kL2 && !(o.epsilon > 0.0)) throw UsageError("--epsilon must be positive");
  if (o.radius && !(*o.radius >= 0.0)) throw UsageError("--radius must be non-negative");
  const auto data = load_curves(o.data);
  const auto query_records = load_curves(o.queries);
  if (data.empty()) throw DataError(o.data + ": no records");
  const Direction direction = resolve_direction(o.direction, data, query_records);

  std::vector<Segment> segments;
  std::vector<std::shared_ptr<const void>> keep;
  Solver solve;
  if (direction == Direction::kSegmentQueries) {
    segments = to_segments(query_records);
    solve = segment_solver(o, metric, data, segments, keep);
  } else {
    segments = to_segments(data);
    for (const Curve& q : query_records) {
      if (q.size() < 2) throw DataError(o.queries + ": query '" + q.id + "' needs at least 2 points");
    }
    solve = curve_solver(o, metric, segments, query_records, keep);
  }

  const std::size_t count = query_records.size();
  std::vector<Answer> answers(count);
  std::vector<double> micros(count, 0.0);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < count; k = next++) {
      try {
        const auto start = Clock::now();
        answers[k] = solve(k);
        micros[k] = micros_since(start);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(o.threads, static_cast<unsigned>(count)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  for (std::size_t k = 0; k < count; ++k) {
    Record r;
    r.str("query", query_records[k].id);
    if (answers[k]) {
      r.str("answer", answers[k]->id).num("distance", answers[k]->distance);
    } else {
      r.null("answer").null("distance");
    }
    r.str("metric", std::string(to_string(metric))).flag("translation", o.common.translation);
    if (metric == Metric::kL2) r.num("epsilon", o.epsilon); else r.null("epsilon");
    if (o.radius) r.num("radius", *o.radius); else r.null("radius");
    if (o.timing) r.num("timing_us", micros[k]);
    out << r.line();
  }
}

// center ------------------------------------------------------------------------------

struct CenterOptions {
  Common common;
  std::string data;
};

void run_center(const CenterOptions& o, std::ostream& out) {
  const Metric metric = checked_metric(o.common);
  const auto curves = load_curves(o.data);
  if (curves.empty()) throw DataError(o.data + ": no records");
  Record r;
  r.str("metric", std::string(to_string(metric))).flag("translation", o.common.translation);
  std::string splits = "[";
  if (o.common.brute) {
    const auto brute = oracles::center_brute(curves, metric, o.common.translation);
    for (std::size_t j = 0; j < brute.splits.size(); ++j) {
      splits += (j ? "," : "") + std::to_string(brute.splits[j]);
    }
    r.num("radius", brute.radius).null("a").null("b").raw("splits", splits + "]");
    out << r.line();
    return;
  }
  const CenterSolution s = o.common.translation ? center_linf_translation(curves)
                           : metric == Metric::kLinf ? center_linf(curves)
                                                     : center_l2(curves);
  for (std::size_t j = 0; j < s.splits.size(); ++j) {
    splits += (j ? "," : "") + std::to_string(s.splits[j]);
  }
  r.num("radius", s.radius).raw("a", point_json(s.a)).raw("b", point_json(s.b)).raw("splits", splits + "]");
  if (o.common.translation) {
    std::string t = "[";
    for (std::size_t j = 0; j < s.translations.size(); ++j) {
      t += (j ? "," : "") + point_json(s.translations[j]);
    }
    r.raw("translations", t + "]");
  }
  out << r.line();
}

// bench -------------------------------------------------------------------------------

struct BenchOptions {
  std::vector<std::size_t> sizes{1000, 2000, 4000};
  std::size_t m = 10;
  std::size_t queries = 200;
  std::uint64_t seed = 1;
  double epsilon = 0.5;
  std::vector<std::string> structures{"linf-segment", "linf-curve", "translation-segment",
                                      "translation-curve", "kgon", "ann", "brute-segment"};
};

const std::vector<std::string> kBenchStructures{"linf-segment",      "linf-curve", "translation-segment",
                                                "translation-curve", "kgon",       "ann",
                                                "brute-segment"};

struct BenchRow {
  double build_us = 0.0;
  std::vector<double> query_us;
};

template <typename Build, typename Query>
BenchRow measure(std::size_t count, Build build, Query query) {
  BenchRow row;
  const auto start = Clock::now();
  auto structure = build();
  row.build_us = micros_since(start);
  for (std::size_t k = 0; k < count; ++k) {
    const auto t = Clock::now();
    query(*structure, k);
    row.query_us.push_back(micros_since(t));
  }
  return row;
}

double percentile(std::vector<double> v, double p) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const auto k = static_cast<std::size_t>(std::ceil(p * static_cast<double>(v.size())));
  return v[std::min(v.size() - 1, k == 0 ? 0 : k - 1)];
}

void run_bench(const BenchOptions& o, std::ostream& out) {
  if (o.m < 2) throw UsageError("--m must be at least 2");
  for (const auto& s : o.structures) {
    if (std::find(kBenchStructures.begin(), kBenchStructures.end(), s) == kBenchStructures.end()) {
      throw UsageError("unknown structure '" + s + "'");
    }
  }
  out << "structure,n,m,build_us,query_us_p50,query_us_p99\n";
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> coord(0.0, 1000.0);
  auto point = [&] { return Point{coord(rng), coord(rng)}; };
  auto label = [](char prefix, std::size_t k) {
    std::ostringstream s;
    s << prefix << k;
    return s.str();
  };
  for (std::size_t n : o.sizes) {
    std::vector<Curve> curves(n);
    for (std::size_t j = 0; j < n; ++j) {
      curves[j].id = label('c', j);
      for (std::size_t i = 0; i < o.m; ++i) curves[j].vertices.push_back(point());
    }
    std::vector<Segment> segments(n);
    for (std::size_t j = 0; j < n; ++j) segments[j] = Segment{label('s', j), point(), point()};
    std::vector<Segment> seg_queries(o.queries);
    for (std::size_t k = 0; k < o.queries; ++k) seg_queries[k] = Segment{label('q', k), point(), point()};
    std::vector<Curve> curve_queries(o.queries);
    for (std::size_t k = 0; k < o.queries; ++k) {
      curve_queries[k].id = label('q', k);
      for (std::size_t i = 0; i < o.m; ++i) curve_queries[k].vertices.push_back(point());
    }

    for (const auto& name : o.structures) {
      BenchRow row;
      if (name == "linf-segment") {
        row = measure(o.queries, [&] { return std::make_unique<SegmentQueryIndex>(curves); },
                      [&](const auto& s, std::size_t k) { s.nearest(seg_queries[k]); });
      } else if (name == "linf-curve") {
        row = measure(o.queries, [&] { return std::make_unique<SegmentEndpointTree>(segments); },
                      [&](const auto& s, std::size_t k) { s.nearest(curve_queries[k]); });
      } else if (name == "translation-segment") {
        row = measure(o.queries, [&] { return std::make_unique<SegmentTranslationIndex>(curves); },
                      [&](const auto& s, std::size_t k) { s.nearest(seg_queries[k]); });
      } else if (name == "translation-curve") {
        row = measure(o.queries, [&] { return std::make_unique<SegmentTranslationTree>(segments); },
                      [&](const auto& s, std::size_t k) { s.nearest(curve_queries[k]); });
      } else if (name == "kgon") {
        row = measure(o.queries, [&] { return std::make_unique<KgonIndex>(segments, o.epsilon); },
                      [&](const auto& s, std::size_t k) { s.nearest(curve_queries[k]); });
      } else if (name == "ann") {
        row = measure(o.queries,
                      [&] { return std::make_unique<AnnIndex>(curves, o.epsilon, 250.0, AnnIndex::Options{0.0}); },
                      [&](const auto& s, std::size_t k) { s.query(seg_queries[k]); });
      } else {
        row = measure(o.queries, [&] { return std::make_unique<int>(0); },
                      [&](const auto&, std::size_t k) {
                        oracles::nn_brute(curves, seg_queries[k], Metric::kLinf, false);
                      });
      }
      out << name << ',' << n << ',' << o.m << ',' << format_number(row.build_us) << ','
          << format_number(percentile(row.query_us, 0.5)) << ','
          << format_number(percentile(row.query_us, 0.99)) << '\n';
    }
  }
}

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--metric", common.metric, "Point metric")
      ->check(CLI::IsMember({"linf", "l2"}))
      ->capture_default_str();
  cmd->add_flag("--translation", common.translation, "Minimize over translations (linf only)");
  cmd->add_flag("--brute", common.brute, "Answer with the brute-force reference implementations");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nearest neighbors and (1,2)-centers of polygonal curves under the discrete "
               "Fréchet distance",
               "curveprox"};
  app.require_subcommand(1);

  DfdOptions dfd;
  auto* dfd_cmd = app.add_subcommand("dfd", "Distance between two records");
  dfd_cmd->add_option("--first", dfd.first, "File holding the first record")->required();
  dfd_cmd->add_option("--second", dfd.second, "File holding the second record (default: --first)");
  dfd_cmd->add_option("--first-id", dfd.first_id, "Id of the first record (default: first line)");
  dfd_cmd->add_option("--second-id", dfd.second_id, "Id of the second record (default: first line)");
  add_common(dfd_cmd, dfd.common);

  NnOptions nn;
  auto* nn_cmd = app.add_subcommand("nn", "Nearest neighbor of every query record");
  nn_cmd->add_option("--data", nn.data, "Indexed records")->required();
  nn_cmd->add_option("--queries", nn.queries, "Query records")->required();
  add_common(nn_cmd, nn.common);
  nn_cmd->add_option("--epsilon", nn.epsilon, "Approximation parameter for --metric l2")->capture_default_str();
  nn_cmd->add_option("--radius", nn.radius, "Answer the decision problem at this distance");
  nn_cmd->add_option("--direction", nn.direction, "segment: queries are segments; curve: data are segments")
      ->check(CLI::IsMember({"auto", "segment", "curve"}))
      ->capture_default_str();
  nn_cmd->add_option("--threads", nn.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  nn_cmd->add_flag("--timing", nn.timing, "Add per-query timing_us to each record");

  CenterOptions center;
  auto* center_cmd = app.add_subcommand("center", "(1,2)-center of all records");
  center_cmd->add_option("--data", center.data, "Input records")->required();
  add_common(center_cmd, center.common);

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Build and query timings as CSV");
  bench_cmd->add_option("--sizes", bench.sizes, "Numbers of stored items")->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--m", bench.m, "Vertices per curve")->capture_default_str();
  bench_cmd->add_option("--queries", bench.queries, "Queries per structure")->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "Random seed")->capture_default_str();
  bench_cmd->add_option("--epsilon", bench.epsilon, "Approximation parameter")->capture_default_str();
  bench_cmd->add_option("--structures", bench.structures, "Subset of " + CLI::detail::join(kBenchStructures))
      ->delimiter(',')
      ->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*dfd_cmd) run_dfd(dfd, out);
    else if (*nn_cmd) run_nn(nn, out);
    else if (*center_cmd) run_center(center, out);
    else run_bench(bench, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  }
  return kExitOk;
}

}  // namespace curveprox::cli
