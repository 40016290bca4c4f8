#include "kubilius/io.hpp"

#include <json.hpp>

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "kubilius/errors.hpp"

namespace kubilius::io {
namespace {

using nlohmann::ordered_json;

ordered_json to_json(const Number& value) {
  if (value.is_exact()) return value.to_string();
  return value.to_double();
}

ordered_json to_json(const std::optional<Number>& value) {
  return value ? to_json(*value) : ordered_json(nullptr);
}

Number from_json(const ordered_json& value, Mode mode) {
  if (value.is_string()) return parse_number(value.get<std::string>(), mode);
  if (value.is_number()) {
    const double d = value.get<double>();
    return mode == Mode::exact ? Number(parse_rational(value.dump())) : Number(d);
  }
  throw InvalidArgument("expected a number in report JSON");
}

std::optional<Number> optional_from_json(const ordered_json& value, Mode mode) {
  if (value.is_null()) return std::nullopt;
  return from_json(value, mode);
}

std::string cell(const std::optional<Number>& value) { return value ? value->to_string() : ""; }

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

ordered_json report_rows(const std::vector<MomentReport>& rows) {
  ordered_json out = ordered_json::array();
  for (const auto& r : rows) {
    out.push_back({{"n", r.n},
                   {"mean", to_json(r.mean)},
                   {"variance", to_json(r.variance)},
                   {"rhs1", to_json(r.rhs1)},
                   {"rhs2", to_json(r.rhs2)},
                   {"ratio1", to_json(r.ratio1)},
                   {"ratio2", to_json(r.ratio2)}});
  }
  return out;
}

ordered_json witness_json(const std::optional<ConditionWitness>& w) {
  if (!w) return nullptr;
  ordered_json out = {{"index", w->index}, {"lhs", to_json(w->lhs)}, {"rhs", to_json(w->rhs)}};
  if (!w->side.empty()) out["side"] = w->side;
  return out;
}

}  // namespace

void write_table_csv(std::ostream& out, const QTable& table, std::size_t n_min) {
  out << "n,value\n";
  for (std::size_t n = n_min; n <= table.max_n(); ++n) out << n << ',' << table.value(n).to_string() << '\n';
}

std::string table_json(const QTable& table, const std::string& class_name, std::size_t n_min,
                       int indent) {
  ordered_json doc;
  doc["class"] = class_name;
  doc["mode"] = std::string(to_string(table.mode()));
  if (table.rho()) doc["rho"] = table.rho()->text();
  doc["excluded"] = table.excluded();
  ordered_json rows = ordered_json::array();
  for (std::size_t n = n_min; n <= table.max_n(); ++n)
    rows.push_back({{"n", n}, {"value", to_json(table.value(n))}});
  doc["rows"] = std::move(rows);
  return doc.dump(indent);
}

void write_reports_csv(std::ostream& out, const std::vector<MomentReport>& rows) {
  out << kReportHeader << '\n';
  for (const auto& r : rows) {
    out << r.n << ',' << r.mean.to_string() << ',' << r.variance.to_string() << ','
        << r.rhs1.to_string() << ',' << cell(r.rhs2) << ',' << cell(r.ratio1) << ','
        << cell(r.ratio2) << '\n';
  }
}

std::vector<MomentReport> read_reports_csv(std::istream& in, Mode mode) {
  std::string line;
  if (!std::getline(in, line) || line != kReportHeader)
    throw InvalidArgument("report CSV must start with '" + std::string(kReportHeader) + "'");
  std::vector<MomentReport> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 7) throw InvalidArgument("report CSV row must have 7 fields: " + line);
    const auto optional = [&](const std::string& f) -> std::optional<Number> {
      if (f.empty()) return std::nullopt;
      return parse_number(f, mode);
    };
    MomentReport r;
    r.n = std::stoul(fields[0]);
    r.mean = parse_number(fields[1], mode);
    r.variance = parse_number(fields[2], mode);
    r.rhs1 = parse_number(fields[3], mode);
    r.rhs2 = optional(fields[4]);
    r.ratio1 = optional(fields[5]);
    r.ratio2 = optional(fields[6]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string reports_json(const std::vector<MomentReport>& rows, const std::string& class_name,
                         const std::string& family, Mode mode, int indent) {
  ordered_json doc;
  doc["class"] = class_name;
  doc["family"] = family;
  doc["mode"] = std::string(to_string(mode));
  doc["rows"] = report_rows(rows);
  return doc.dump(indent);
}

std::string sweep_json(const SweepResult& sweep, const std::string& class_name,
                       const std::string& family, Mode mode, int indent) {
  ordered_json doc;
  doc["class"] = class_name;
  doc["family"] = family;
  doc["mode"] = std::string(to_string(mode));
  doc["rows"] = report_rows(sweep.rows);
  doc["skipped"] = sweep.skipped;
  doc["sup_ratio1"] = to_json(sweep.sup_ratio1);
  doc["sup_ratio2"] = to_json(sweep.sup_ratio2);
  return doc.dump(indent);
}

std::vector<MomentReport> read_reports_json(std::string_view text, Mode mode) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw InvalidArgument(std::string("malformed report JSON: ") + e.what());
  }
  std::vector<MomentReport> rows;
  for (const auto& item : doc.at("rows")) {
    MomentReport r;
    r.n = item.at("n").get<std::size_t>();
    r.mean = from_json(item.at("mean"), mode);
    r.variance = from_json(item.at("variance"), mode);
    r.rhs1 = from_json(item.at("rhs1"), mode);
    r.rhs2 = optional_from_json(item.at("rhs2"), mode);
    r.ratio1 = optional_from_json(item.at("ratio1"), mode);
    r.ratio2 = optional_from_json(item.at("ratio2"), mode);
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_pmf_csv(std::ostream& out, const SpectrumPMF& pmf) {
  out << "k,p\n";
  for (std::size_t k = 0; k < pmf.p.size(); ++k) out << k << ',' << pmf.p[k].to_string() << '\n';
}

std::string pmf_json(const SpectrumPMF& pmf, const std::string& class_name, int indent) {
  ordered_json doc;
  doc["class"] = class_name;
  doc["mode"] = std::string(to_string(pmf.mode));
  doc["n"] = pmf.n;
  doc["j"] = pmf.j;
  ordered_json p = ordered_json::array();
  for (const auto& v : pmf.p) p.push_back(to_json(v));
  doc["p"] = std::move(p);
  return doc.dump(indent);
}

void write_verdicts_csv(std::ostream& out, const std::vector<ConditionVerdict>& verdicts) {
  out << "condition,holds,witness_index,lhs,rhs,side,checked_range,exact,tolerance,skipped\n";
  for (const auto& v : verdicts) {
    out << to_string(v.condition) << ',' << (v.holds ? "true" : "false") << ',';
    if (v.witness)
      out << v.witness->index << ',' << v.witness->lhs.to_string() << ','
          << v.witness->rhs.to_string() << ',' << v.witness->side;
    else
      out << ",,,";
    out << ',' << v.checked_range << ',' << (v.exact_comparison ? "true" : "false") << ','
        << format_double(v.tolerance) << ',';
    for (std::size_t i = 0; i < v.skipped_orders.size(); ++i)
      out << (i ? ";" : "") << v.skipped_orders[i];
    out << '\n';
  }
}

std::string verdicts_json(const std::vector<ConditionVerdict>& verdicts,
                          const WeaklyLogParams& params, const std::string& class_name,
                          int indent) {
  ordered_json doc;
  doc["class"] = class_name;
  doc["constants"] = {{"rho", params.rho.text()},
                      {"Theta", to_json(params.Theta)},
                      {"theta", to_json(params.theta)},
                      {"theta_prime", to_json(params.theta_prime)},
                      {"n0", params.n0}};
  ordered_json list = ordered_json::array();
  for (const auto& v : verdicts) {
    list.push_back({{"condition", std::string(to_string(v.condition))},
                    {"holds", v.holds},
                    {"witness", witness_json(v.witness)},
                    {"checked_range", v.checked_range},
                    {"exact", v.exact_comparison},
                    {"tolerance", v.tolerance},
                    {"skipped", v.skipped_orders}});
  }
  doc["verdicts"] = std::move(list);
  return doc.dump(indent);
}

void write_profiles_csv(std::ostream& out, const std::vector<Profile>& profiles) {
  out << "sample,j,s_j\n";
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    const auto& s = profiles[i].s;
    for (std::size_t j = 1; j < s.size(); ++j)
      if (s[j] != 0) out << i << ',' << j << ',' << s[j] << '\n';
  }
}

}  // namespace kubilius::io
