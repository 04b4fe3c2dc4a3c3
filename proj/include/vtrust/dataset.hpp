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

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vtrust/calendar.hpp"

namespace vtrust {

/// One piece of vulnerability evidence: a CVE attributed to a source
/// component, dated by publication.
struct VulnRecord {
  std::string component;
  std::string cve_id;
  Date published;

  friend bool operator==(const VulnRecord&, const VulnRecord&) = default;
};

/// Monthly vulnerability counts for one component; counts[j] is the month
/// `start + j`.
struct VulnSeries {
  std::string component;
  YearMonth start;
  std::vector<int> counts;

  int total() const;
  YearMonth last() const;
  /// Sum of counts for the months in `range` that the series covers.
  int sum(const MonthRange& range) const;
};

/// Default evidence window, from the first training month to the last test month.
inline constexpr MonthRange kDefaultEpoch{
    YearMonth{std::chrono::year{2001}, std::chrono::month{1}},
    YearMonth{std::chrono::year{2017}, std::chrono::month{9}}};

/// Immutable set of vulnerability records inside an epoch.
///
/// Construction deduplicates (component, cve_id) pairs keeping the earliest
/// publication date and orders records by (component, published, cve_id).
class Dataset {
 public:
  Dataset() : epoch_(kDefaultEpoch) {}
  Dataset(std::vector<VulnRecord> records, MonthRange epoch);

  const std::vector<VulnRecord>& records() const { return records_; }
  const MonthRange& epoch() const { return epoch_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  /// Sorted distinct component names.
  std::vector<std::string> components() const;
  bool has_component(std::string_view component) const;
  /// All-time record count for `component` (0 when absent).
  std::size_t count_for(std::string_view component) const;
  /// Records of one component, in date order.
  std::vector<VulnRecord> records_for(std::string_view component) const;

 private:
  std::vector<VulnRecord> records_;
  MonthRange epoch_;
  // component -> [begin, end) into records_
  std::map<std::string, std::pair<std::size_t, std::size_t>, std::less<>> index_;
};

struct IngestOptions {
  MonthRange epoch = kDefaultEpoch;
};

/// Bookkeeping for one ingestion run. Soft failures (undated or
/// out-of-epoch evidence) are counted here rather than raised.
struct IngestReport {
  std::size_t rows_read = 0;
  std::size_t records = 0;
  std::size_t duplicates_collapsed = 0;
  std::size_t skipped_undated = 0;
  std::size_t skipped_out_of_epoch = 0;
  std::vector<std::string> undated_cves;
};

struct IngestResult {
  Dataset dataset;
  IngestReport report;
};

/// Reads the canonical `component,cve_id,published` CSV.
/// Throws ParseError (with line number) or EmptyDataset.
IngestResult ingest_csv(std::istream& in, const IngestOptions& options = {});
IngestResult ingest_csv(const std::filesystem::path& path,
                        const IngestOptions& options = {});

/// Reads a tracker-style export (package -> {cve_id -> object}) plus a
/// `cve_id,published` date table. CVEs without a date are skipped and
/// reported; more than half undated raises MissingDates.
IngestResult ingest_tracker_json(std::istream& tracker, std::istream& cve_dates,
                                 const IngestOptions& options = {});
IngestResult ingest_tracker_json(const std::filesystem::path& tracker,
                                 const std::filesystem::path& cve_dates,
                                 const IngestOptions& options = {});

/// Writes the canonical CSV (header included), in dataset order.
void write_csv(const Dataset& dataset, std::ostream& out);

/// Restricts a dataset to a package set and/or a month window.
struct DatasetFilter {
  std::optional<std::vector<std::string>> packages;
  std::optional<YearMonth> start;
  std::optional<YearMonth> end;
};

/// Parses {"packages":[...], "start":"YYYY-MM", "end":"YYYY-MM"}; every key
/// is optional.
DatasetFilter parse_filter(std::string_view json_text);
DatasetFilter load_filter(const std::filesystem::path& path);
Dataset apply_filter(const Dataset& dataset, const DatasetFilter& filter);

/// Monthly counts over the dataset epoch. Throws UnknownComponent.
VulnSeries bin_monthly(const Dataset& dataset, std::string_view component);

std::map<int, std::size_t> yearly_totals(const Dataset& dataset);

/// Vulnerabilities in `year` divided by the number of components with at
/// least one record that year; 0 when the year has no records.
double avg_per_affected(const Dataset& dataset, int year);

struct RankedComponent {
  std::string component;
  std::size_t count = 0;
  /// "k" or, for a tie spanning positions k1..k2, "k1-k2".
  std::string rank;
};

/// Components ranked by record count (descending, ties by name) within an
/// optional month window. Only components with a non-zero count are ranked.
std::vector<RankedComponent> top_n(const Dataset& dataset, std::size_t n,
                                   std::optional<MonthRange> window = std::nullopt);

/// All-time totals >= min_count, descending.
std::vector<std::pair<std::string, std::size_t>> distribution_export(
    const Dataset& dataset, std::size_t min_count);

/// Per-component record counts inside `window` (components with zero count
/// omitted).
std::map<std::string, std::size_t> counts_in_window(const Dataset& dataset,
                                                    const MonthRange& window);

}  // namespace vtrust
