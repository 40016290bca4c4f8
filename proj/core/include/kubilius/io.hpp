#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "kubilius/conditions.hpp"
#include "kubilius/counting.hpp"
#include "kubilius/moments.hpp"
#include "kubilius/oracle.hpp"

namespace kubilius::io {

// Table dump: header "n,value" followed by rows n_min..max_n.
void write_table_csv(std::ostream& out, const QTable& table, std::size_t n_min = 0);

inline constexpr std::string_view kReportHeader = "n,mean,variance,rhs1,rhs2,ratio1,ratio2";

// Absent optional fields are written as empty cells.
void write_reports_csv(std::ostream& out, const std::vector<MomentReport>& rows);
std::vector<MomentReport> read_reports_csv(std::istream& in, Mode mode);

// Exact values are "p/q" strings, floats are JSON numbers, absent values null.
std::string reports_json(const std::vector<MomentReport>& rows, const std::string& class_name,
                         const std::string& family, Mode mode, int indent = 2);
// reports_json plus skipped orders and the sup ratios.
std::string sweep_json(const SweepResult& sweep, const std::string& class_name,
                       const std::string& family, Mode mode, int indent = 2);
std::vector<MomentReport> read_reports_json(std::string_view text, Mode mode);

void write_pmf_csv(std::ostream& out, const SpectrumPMF& pmf);
std::string pmf_json(const SpectrumPMF& pmf, const std::string& class_name, int indent = 2);

std::string table_json(const QTable& table, const std::string& class_name, std::size_t n_min = 0,
                       int indent = 2);

void write_verdicts_csv(std::ostream& out, const std::vector<ConditionVerdict>& verdicts);
std::string verdicts_json(const std::vector<ConditionVerdict>& verdicts,
                          const WeaklyLogParams& params, const std::string& class_name,
                          int indent = 2);

// One row per nonzero multiplicity: sample,j,s_j.
void write_profiles_csv(std::ostream& out, const std::vector<Profile>& profiles);

}  // namespace kubilius::io
