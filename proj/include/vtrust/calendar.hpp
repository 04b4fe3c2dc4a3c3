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

#include <chrono>
#include <string>
#include <string_view>

namespace vtrust {

using YearMonth = std::chrono::year_month;
using Date = std::chrono::year_month_day;

/// Parses "YYYY-MM". Throws ParseError.
YearMonth parse_year_month(std::string_view text);

/// Parses an ISO "YYYY-MM-DD" calendar date. Throws ParseError on malformed
/// text or an impossible date such as 2016-13-01.
Date parse_date(std::string_view text);

std::string format(YearMonth ym);
std::string format(const Date& date);

/// Months elapsed from `from` to `to` (negative when `to` precedes `from`).
int months_between(YearMonth from, YearMonth to);

inline YearMonth month_of(const Date& date) {
  return YearMonth{date.year(), date.month()};
}

/// Inclusive range of calendar months.
struct MonthRange {
  YearMonth first;
  YearMonth last;

  /// Number of months covered; zero for an inverted range.
  int size() const;
  bool contains(YearMonth ym) const;
  bool contains(const Date& date) const { return contains(month_of(date)); }
  /// Zero-based offset of `ym` from `first`.
  int index_of(YearMonth ym) const { return months_between(first, ym); }
};

/// Parses "YYYY-MM:YYYY-MM".
MonthRange parse_month_range(std::string_view text);

}  // namespace vtrust
