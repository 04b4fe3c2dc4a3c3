/*
 * Copyright 2026 The vtrust Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "vtrust/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "json.hpp"
#include "vtrust/error.hpp"

namespace vtrust {

namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t'))
    s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(pos)));
      break;
    }
    fields.push_back(trim(line.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return fields;
}

std::string strip_bom(std::string line) {
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
      static_cast<unsigned char>(line[1]) == 0xBB &&
      static_cast<unsigned char>(line[2]) == 0xBF)
    line.erase(0, 3);
  return line;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return in;
}

// Drops out-of-epoch records into the report, then builds the dataset.
IngestResult finish_ingest(std::vector<VulnRecord> rows, IngestReport report,
                           const IngestOptions& options) {
  std::vector<VulnRecord> kept;
  kept.reserve(rows.size());
  for (auto& r : rows) {
    if (options.epoch.contains(r.published))
      kept.push_back(std::move(r));
    else
      ++report.skipped_out_of_epoch;
  }
  const std::size_t before = kept.size();
  Dataset dataset(std::move(kept), options.epoch);
  report.duplicates_collapsed = before - dataset.size();
  report.records = dataset.size();
  if (dataset.empty())
    throw Error(ErrorCode::EmptyDataset, "no valid vulnerability records");
  return IngestResult{std::move(dataset), std::move(report)};
}

}  // namespace

int VulnSeries::total() const {
  int sum = 0;
  for (int c : counts) sum += c;
  return sum;
}

YearMonth VulnSeries::last() const {
  return start + std::chrono::months{static_cast<int>(counts.size()) - 1};
}

int VulnSeries::sum(const MonthRange& range) const {
  int s = 0;
  const int lo = std::max(0, months_between(start, range.first));
  const int hi = std::min(static_cast<int>(counts.size()) - 1,
                          months_between(start, range.last));
  for (int j = lo; j <= hi; ++j) s += counts[static_cast<std::size_t>(j)];
  return s;
}

Dataset::Dataset(std::vector<VulnRecord> records, MonthRange epoch)
    : epoch_(epoch) {
  if (epoch.size() == 0)
    throw Error(ErrorCode::InvalidArgument, "dataset epoch is empty");
  for (const auto& r : records) {
    if (!r.published.ok())
      throw Error(ErrorCode::InvalidArgument, "record with invalid date");
    if (!epoch.contains(r.published))
      throw Error(ErrorCode::InvalidArgument,
                  "record " + r.component + "/" + r.cve_id + " outside epoch");
  }
  // Earliest date first so that unique() keeps it.
  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return std::tie(a.component, a.cve_id, a.published) <
           std::tie(b.component, b.cve_id, b.published);
  });
  records.erase(std::unique(records.begin(), records.end(),
                            [](const auto& a, const auto& b) {
                              return a.component == b.component &&
                                     a.cve_id == b.cve_id;
                            }),
                records.end());
  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return std::tie(a.component, a.published, a.cve_id) <
           std::tie(b.component, b.published, b.cve_id);
  });
  records_ = std::move(records);

  std::size_t begin = 0;
  for (std::size_t i = 1; i <= records_.size(); ++i) {
    if (i == records_.size() || records_[i].component != records_[begin].component) {
      index_.emplace(records_[begin].component, std::make_pair(begin, i));
      begin = i;
    }
  }
}

std::vector<std::string> Dataset::components() const {
  std::vector<std::string> names;
  names.reserve(index_.size());
  for (const auto& [name, _] : index_) names.push_back(name);
  return names;
}

bool Dataset::has_component(std::string_view component) const {
  return index_.find(component) != index_.end();
}

std::size_t Dataset::count_for(std::string_view component) const {
  const auto it = index_.find(component);
  return it == index_.end() ? 0 : it->second.second - it->second.first;
}

std::vector<VulnRecord> Dataset::records_for(std::string_view component) const {
  const auto it = index_.find(component);
  if (it == index_.end()) return {};
  return {records_.begin() + static_cast<std::ptrdiff_t>(it->second.first),
          records_.begin() + static_cast<std::ptrdiff_t>(it->second.second)};
}

IngestResult ingest_csv(std::istream& in, const IngestOptions& options) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing CSV header", 1);
  if (trim(strip_bom(line)) != "component,cve_id,published")
    throw ParseError("header must be exactly 'component,cve_id,published'", 1);

  IngestReport report;
  std::vector<VulnRecord> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 3)
      throw ParseError("expected 3 fields, got " + std::to_string(fields.size()),
                       line_no);
    if (fields[0].empty() || fields[1].empty())
      throw ParseError("empty component or cve_id", line_no);
    Date published;
    try {
      published = parse_date(fields[2]);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
    ++report.rows_read;
    rows.push_back({std::string(fields[0]), std::string(fields[1]), published});
  }
  return finish_ingest(std::move(rows), std::move(report), options);
}

IngestResult ingest_csv(const std::filesystem::path& path,
                        const IngestOptions& options) {
  auto in = open_input(path);
  return ingest_csv(in, options);
}

IngestResult ingest_tracker_json(std::istream& tracker, std::istream& cve_dates,
                                 const IngestOptions& options) {
  json doc;
  try {
    doc = json::parse(tracker);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("tracker JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("tracker JSON top level must be an object");

  std::unordered_map<std::string, Date> dates;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(cve_dates, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty()) continue;
    if (line_no == 1 && trim(strip_bom(line)) == "cve_id,published") continue;
    const auto fields = split_fields(t);
    if (fields.size() != 2 || fields[0].empty())
      throw ParseError("expected 'cve_id,published'", line_no);
    try {
      dates.emplace(std::string(fields[0]), parse_date(fields[1]));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
  }

  IngestReport report;
  std::vector<VulnRecord> rows;
  std::set<std::string> undated;
  std::size_t total = 0;
  for (const auto& [package, cves] : doc.items()) {
    if (!cves.is_object())
      throw ParseError("package '" + package + "' must map to an object of CVEs");
    for (const auto& [cve, _] : cves.items()) {
      ++total;
      ++report.rows_read;
      const auto it = dates.find(cve);
      if (it == dates.end()) {
        ++report.skipped_undated;
        undated.insert(cve);
        continue;
      }
      rows.push_back({package, cve, it->second});
    }
  }
  report.undated_cves.assign(undated.begin(), undated.end());
  if (total == 0) throw Error(ErrorCode::EmptyDataset, "tracker export lists no CVEs");
  if (report.skipped_undated * 2 > total)
    throw Error(ErrorCode::MissingDates,
                std::to_string(report.skipped_undated) + " of " +
                    std::to_string(total) + " CVEs have no publication date");
  return finish_ingest(std::move(rows), std::move(report), options);
}

IngestResult ingest_tracker_json(const std::filesystem::path& tracker,
                                 const std::filesystem::path& cve_dates,
                                 const IngestOptions& options) {
  auto t = open_input(tracker);
  auto d = open_input(cve_dates);
  return ingest_tracker_json(t, d, options);
}

void write_csv(const Dataset& dataset, std::ostream& out) {
  out << "component,cve_id,published\n";
  for (const auto& r : dataset.records())
    out << r.component << ',' << r.cve_id << ',' << format(r.published) << '\n';
}

DatasetFilter parse_filter(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("filter JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("filter must be a JSON object");
  DatasetFilter filter;
  try {
    if (doc.contains("packages"))
      filter.packages = doc.at("packages").get<std::vector<std::string>>();
    if (doc.contains("start"))
      filter.start = parse_year_month(doc.at("start").get<std::string>());
    if (doc.contains("end")) filter.end = parse_year_month(doc.at("end").get<std::string>());
  } catch (const json::exception& e) {
    throw ParseError(std::string("filter JSON: ") + e.what());
  }
  return filter;
}

DatasetFilter load_filter(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_filter(buf.str());
}

Dataset apply_filter(const Dataset& dataset, const DatasetFilter& filter) {
  MonthRange epoch = dataset.epoch();
  if (filter.start) epoch.first = std::max(epoch.first, *filter.start);
  if (filter.end) epoch.last = std::min(epoch.last, *filter.end);
  if (epoch.size() == 0)
    throw Error(ErrorCode::InvalidArgument, "filter window does not overlap the epoch");

  std::set<std::string, std::less<>> wanted;
  if (filter.packages) wanted.insert(filter.packages->begin(), filter.packages->end());

  std::vector<VulnRecord> kept;
  for (const auto& r : dataset.records()) {
    if (filter.packages && !wanted.contains(r.component)) continue;
    if (!epoch.contains(r.published)) continue;
    kept.push_back(r);
  }
  return Dataset(std::move(kept), epoch);
}

VulnSeries bin_monthly(const Dataset& dataset, std::string_view component) {
  if (!dataset.has_component(component))
    throw Error(ErrorCode::UnknownComponent,
                "no records for component '" + std::string(component) + "'");
  const auto& epoch = dataset.epoch();
  VulnSeries series{std::string(component), epoch.first,
                    std::vector<int>(static_cast<std::size_t>(epoch.size()), 0)};
  for (const auto& r : dataset.records_for(component))
    ++series.counts[static_cast<std::size_t>(epoch.index_of(month_of(r.published)))];
  return series;
}

std::map<int, std::size_t> yearly_totals(const Dataset& dataset) {
  std::map<int, std::size_t> totals;
  for (const auto& r : dataset.records()) ++totals[static_cast<int>(r.published.year())];
  return totals;
}

double avg_per_affected(const Dataset& dataset, int year) {
  std::size_t vulns = 0;
  std::set<std::string_view> affected;
  for (const auto& r : dataset.records()) {
    if (static_cast<int>(r.published.year()) != year) continue;
    ++vulns;
    affected.insert(r.component);
  }
  if (affected.empty()) return 0.0;
  return static_cast<double>(vulns) / static_cast<double>(affected.size());
}

std::map<std::string, std::size_t> counts_in_window(const Dataset& dataset,
                                                    const MonthRange& window) {
  std::map<std::string, std::size_t> counts;
  for (const auto& r : dataset.records())
    if (window.contains(r.published)) ++counts[r.component];
  return counts;
}

std::vector<RankedComponent> top_n(const Dataset& dataset, std::size_t n,
                                   std::optional<MonthRange> window) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "top_n needs n >= 1");
  const auto counts = counts_in_window(dataset, window.value_or(dataset.epoch()));

  std::vector<RankedComponent> ranked;
  ranked.reserve(counts.size());
  for (const auto& [name, count] : counts) ranked.push_back({name, count, {}});
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.count > b.count; });

  for (std::size_t i = 0; i < ranked.size();) {
    std::size_t j = i;
    while (j + 1 < ranked.size() && ranked[j + 1].count == ranked[i].count) ++j;
    const std::string rank = i == j ? std::to_string(i + 1)
                                    : std::to_string(i + 1) + "-" + std::to_string(j + 1);
    for (std::size_t k = i; k <= j; ++k) ranked[k].rank = rank;
    i = j + 1;
  }
  if (ranked.size() > n) ranked.resize(n);
  return ranked;
}

std::vector<std::pair<std::string, std::size_t>> distribution_export(
    const Dataset& dataset, std::size_t min_count) {
  if (min_count == 0)
    throw Error(ErrorCode::InvalidArgument, "distribution_export needs min_count >= 1");
  std::vector<std::pair<std::string, std::size_t>> out;
  for (const auto& name : dataset.components()) {
    const auto total = dataset.count_for(name);
    if (total >= min_count) out.emplace_back(name, total);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

}  // namespace vtrust
