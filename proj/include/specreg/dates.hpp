#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace specreg {

/// Calendar date without time zone.
using Date = std::chrono::sys_days;

/// Parses a strict ISO-8601 `yyyy-mm-dd` date.
std::optional<Date> parse_iso_date(std::string_view text);

std::string format_iso_date(Date date);

/// Monday of the ISO week containing `date`; identifies the ISO week uniquely.
Date iso_week_start(Date date);

}  // namespace specreg
