#include "lpm/timestamp.hpp"

#include <cctype>
#include <ctime>
#include <iomanip>
#include <sstream>

namespace lpm {
namespace {

using namespace std::chrono;

bool read_digits(std::string_view s, std::size_t& pos, int count, int& out) {
  if (pos + count > s.size()) return false;
  int v = 0;
  for (int i = 0; i < count; ++i) {
    char c = s[pos + i];
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    v = v * 10 + (c - '0');
  }
  pos += count;
  out = v;
  return true;
}

bool expect(std::string_view s, std::size_t& pos, char c) {
  if (pos < s.size() && s[pos] == c) {
    ++pos;
    return true;
  }
  return false;
}

std::optional<Timestamp> make_instant(int y, int mo, int d, int h, int mi, int sec, int ms) {
  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || sec > 60 || ms > 999) return std::nullopt;
  return Timestamp{sys_days{ymd}} + hours{h} + minutes{mi} + seconds{sec} + milliseconds{ms};
}

// Reads ".fff..." and keeps millisecond precision.
bool read_fraction(std::string_view s, std::size_t& pos, int& ms) {
  ms = 0;
  if (!expect(s, pos, '.')) return true;
  int digits = 0;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
    if (digits < 3) ms = ms * 10 + (s[pos] - '0');
    ++digits;
    ++pos;
  }
  if (digits == 0) return false;
  for (int i = digits; i < 3; ++i) ms *= 10;
  return true;
}

}  // namespace

std::optional<Timestamp> parse_iso8601(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);

  std::size_t pos = 0;
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0, ms = 0;
  if (!read_digits(text, pos, 4, y) || !expect(text, pos, '-') || !read_digits(text, pos, 2, mo) ||
      !expect(text, pos, '-') || !read_digits(text, pos, 2, d))
    return std::nullopt;
  if (pos == text.size()) return make_instant(y, mo, d, 0, 0, 0, 0);
  if (!expect(text, pos, 'T') && !expect(text, pos, ' ')) return std::nullopt;
  if (!read_digits(text, pos, 2, h) || !expect(text, pos, ':') || !read_digits(text, pos, 2, mi))
    return std::nullopt;
  if (expect(text, pos, ':')) {
    if (!read_digits(text, pos, 2, sec) || !read_fraction(text, pos, ms)) return std::nullopt;
  }
  auto base = make_instant(y, mo, d, h, mi, sec, ms);
  if (!base) return std::nullopt;
  if (pos == text.size() || expect(text, pos, 'Z')) {
    return pos == text.size() ? base : std::nullopt;
  }
  char sign = text[pos++];
  if (sign != '+' && sign != '-') return std::nullopt;
  int oh = 0, om = 0;
  if (!read_digits(text, pos, 2, oh)) return std::nullopt;
  expect(text, pos, ':');
  if (pos < text.size() && !read_digits(text, pos, 2, om)) return std::nullopt;
  if (pos != text.size()) return std::nullopt;
  auto offset = hours{oh} + minutes{om};
  return sign == '+' ? *base - offset : *base + offset;
}

std::optional<Timestamp> parse_with_format(std::string_view text, const std::string& format) {
  // std::get_time cannot read sub-second digits; peel them off after %S.
  std::string input(text);
  int ms = 0;
  if (format.size() >= 2 && format.compare(format.size() - 2, 2, "%S") == 0) {
    auto dot = input.find_last_of('.');
    if (dot != std::string::npos && input.find(':', dot) == std::string::npos) {
      std::size_t pos = dot;
      std::string_view tail(input);
      if (!read_fraction(tail, pos, ms) || pos != input.size()) return std::nullopt;
      input.resize(dot);
    }
  }
  std::tm tm{};
  tm.tm_mday = 1;
  std::istringstream in(input);
  in >> std::get_time(&tm, format.c_str());
  if (in.fail()) return std::nullopt;
  in >> std::ws;
  if (!in.eof()) return std::nullopt;
  return make_instant(tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, ms);
}

namespace {

std::tm to_tm(Timestamp t) {
  auto day_point = floor<days>(t);
  year_month_day ymd{day_point};
  hh_mm_ss<milliseconds> tod{t - day_point};
  std::tm tm{};
  tm.tm_year = static_cast<int>(ymd.year()) - 1900;
  tm.tm_mon = static_cast<int>(static_cast<unsigned>(ymd.month())) - 1;
  tm.tm_mday = static_cast<int>(static_cast<unsigned>(ymd.day()));
  tm.tm_hour = static_cast<int>(tod.hours().count());
  tm.tm_min = static_cast<int>(tod.minutes().count());
  tm.tm_sec = static_cast<int>(tod.seconds().count());
  tm.tm_wday = static_cast<int>(weekday{day_point}.c_encoding());
  return tm;
}

int millis_of(Timestamp t) {
  return static_cast<int>((t - floor<seconds>(t)).count());
}

}  // namespace

std::string format_iso8601(Timestamp t) {
  std::tm tm = to_tm(t);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%S") << '.' << std::setw(3) << std::setfill('0') << millis_of(t)
      << "+00:00";
  return out.str();
}

std::string format_with(Timestamp t, const std::string& format) {
  std::tm tm = to_tm(t);
  std::ostringstream out;
  out << std::put_time(&tm, format.c_str());
  int ms = millis_of(t);
  if (ms != 0 && format.size() >= 2 && format.compare(format.size() - 2, 2, "%S") == 0) {
    out << '.' << std::setw(3) << std::setfill('0') << ms;
  }
  return out.str();
}

}  // namespace lpm
