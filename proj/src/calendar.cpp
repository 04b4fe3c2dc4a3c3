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

#include "vtrust/calendar.hpp"

#include <charconv>
#include <cstdio>

#include "vtrust/error.hpp"

namespace vtrust {

namespace {

int parse_digits(std::string_view text, std::string_view whole) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw ParseError("invalid calendar value '" + std::string(whole) + "'");
  return value;
}

}  // namespace

YearMonth parse_year_month(std::string_view text) {
  if (text.size() != 7 || text[4] != '-')
    throw ParseError("expected YYYY-MM, got '" + std::string(text) + "'");
  const int y = parse_digits(text.substr(0, 4), text);
  const int m = parse_digits(text.substr(5, 2), text);
  YearMonth ym{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)}};
  if (!ym.ok()) throw ParseError("invalid month in '" + std::string(text) + "'");
  return ym;
}

Date parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-')
    throw ParseError("expected YYYY-MM-DD, got '" + std::string(text) + "'");
  const int y = parse_digits(text.substr(0, 4), text);
  const int m = parse_digits(text.substr(5, 2), text);
  const int d = parse_digits(text.substr(8, 2), text);
  Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
            std::chrono::day{static_cast<unsigned>(d)}};
  if (!date.ok()) throw ParseError("invalid date '" + std::string(text) + "'");
  return date;
}

std::string format(YearMonth ym) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u", static_cast<int>(ym.year()),
                static_cast<unsigned>(ym.month()));
  return buf;
}

std::string format(const Date& date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()),
                static_cast<unsigned>(date.day()));
  return buf;
}

int months_between(YearMonth from, YearMonth to) {
  return (static_cast<int>(to.year()) - static_cast<int>(from.year())) * 12 +
         static_cast<int>(static_cast<unsigned>(to.month())) -
         static_cast<int>(static_cast<unsigned>(from.month()));
}

int MonthRange::size() const {
  const int n = months_between(first, last) + 1;
  return n > 0 ? n : 0;
}

bool MonthRange::contains(YearMonth ym) const {
  return first <= ym && ym <= last;
}

MonthRange parse_month_range(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw ParseError("expected YYYY-MM:YYYY-MM, got '" + std::string(text) + "'");
  MonthRange range{parse_year_month(text.substr(0, colon)),
                   parse_year_month(text.substr(colon + 1))};
  if (range.size() == 0)
    throw ParseError("month range '" + std::string(text) + "' is inverted");
  return range;
}

}  // namespace vtrust
