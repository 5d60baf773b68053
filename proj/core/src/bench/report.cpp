#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "pfmc/bench/runner.hpp"

namespace pfmc::bench {

double median(std::vector<double> values) {
  std::erase_if(values, [](double v) { return std::isnan(v); });
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const size_t mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

namespace {

std::string fmt(double v, int prec = 10) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os.precision(prec);
  os << v;
  return os.str();
}

}  // namespace

std::string csv_header() {
  return "case,method,fad,seed,k,lambda,d,n_d,delta,mape_vmag,mape_phase,time_sec,status,nodes";
}

std::string to_csv_row(const BenchmarkRecord& r) {
  std::ostringstream os;
  std::string status = r.status;
  std::replace(status.begin(), status.end(), ',', ';');
  os << r.case_name << ',' << to_string(r.method) << ',' << fmt(r.fad) << ',' << r.seed << ','
     << r.k << ',' << fmt(r.lambda) << ',' << r.d << ',' << r.n_d << ',' << fmt(r.delta) << ','
     << fmt(r.mape_vmag) << ',' << fmt(r.mape_phase) << ',' << fmt(r.wall_time_sec, 6) << ','
     << status << ',' << r.nodes;
  return os.str();
}

void write_csv(const std::vector<BenchmarkRecord>& records, const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << csv_header() << '\n';
  for (const auto& r : records) f << to_csv_row(r) << '\n';
}

Summary summarize(const std::vector<BenchmarkRecord>& records) {
  // Group by (case, method, d, n_d, fad); aggregate MAPE/time over seeds.
  struct Key {
    std::string case_name;
    Method method;
    int d, n_d;
    double fad;
    bool operator<(const Key& o) const {
      return std::tie(case_name, method, d, n_d, fad) <
             std::tie(o.case_name, o.method, o.d, o.n_d, o.fad);
    }
  };
  struct Agg {
    std::vector<double> mape, time;
    int solved = 0, failed = 0;
  };
  std::map<Key, Agg> groups;
  for (const auto& r : records) {
    Agg& a = groups[{r.case_name, r.method, r.d, r.n_d, r.fad}];
    if (r.solved()) {
      a.mape.push_back(r.mape_vmag);
      ++a.solved;
    } else {
      ++a.failed;
    }
    a.time.push_back(r.wall_time_sec);
  }

  auto iqr = [](std::vector<double> v) -> std::pair<double, double> {
    std::erase_if(v, [](double x) { return std::isnan(x); });
    if (v.empty())
      return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
    std::sort(v.begin(), v.end());
    auto q = [&](double f) {
      const double pos = f * (static_cast<double>(v.size()) - 1);
      const size_t lo = static_cast<size_t>(pos);
      const size_t hi = std::min(lo + 1, v.size() - 1);
      return v[lo] + (pos - lo) * (v[hi] - v[lo]);
    };
    return {q(0.25), q(0.75)};
  };

  std::ostringstream text, md, csv;
  csv << "case,method,d,n_d,fad,cells,solved,mape_median,mape_q1,mape_q3,time_median\n";
  md << "| case | method | d | n_d | FAD | median MAPE %% | IQR | median time s | solved |\n";
  md << "|---|---|---|---|---|---|---|---|---|\n";
  text << "case                 method   d   n_d   FAD    MAPE%%(med)   time(med)  solved\n";

  char buf[256];
  for (const auto& [key, agg] : groups) {
    const double m = median(agg.mape);
    const auto [q1, q3] = iqr(agg.mape);
    const double t = median(agg.time);
    const int cells = agg.solved + agg.failed;
    const std::string mape_str = agg.solved == 0 ? "N/A" : fmt(m, 4);

    std::snprintf(buf, sizeof(buf), "%-20s %-7s %3d %5d  %.2f   %-10s   %8.2f   %d/%d\n",
                  key.case_name.c_str(), to_string(key.method).c_str(), key.d, key.n_d, key.fad,
                  mape_str.c_str(), t, agg.solved, cells);
    text << buf;
    md << "| " << key.case_name << " | " << to_string(key.method) << " | " << key.d << " | "
       << key.n_d << " | " << fmt(key.fad, 4) << " | " << mape_str << " | [" << fmt(q1, 4) << ", "
       << fmt(q3, 4) << "] | " << fmt(t, 4) << " | " << agg.solved << "/" << cells << " |\n";
    csv << key.case_name << ',' << to_string(key.method) << ',' << key.d << ',' << key.n_d << ','
        << fmt(key.fad) << ',' << cells << ',' << agg.solved << ',' << fmt(m) << ',' << fmt(q1)
        << ',' << fmt(q3) << ',' << fmt(t) << '\n';
  }

  Summary s;
  s.text = text.str();
  s.markdown = md.str();
  s.csv = csv.str();
  return s;
}

}  // namespace pfmc::bench
