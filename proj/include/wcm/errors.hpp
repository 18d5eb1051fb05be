#pragma once

#include <stdexcept>
#include <string>

namespace wcm {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParseError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

struct TopologyError : Error {
    using Error::Error;
};

struct IndexError : Error {
    using Error::Error;
};

struct DegenerateSimplex : Error {
    using Error::Error;
};

struct DegenerateInput : Error {
    using Error::Error;
};

struct TooManyPoints : Error {
    using Error::Error;
};

struct ScheduleError : Error {
    using Error::Error;
};

} // namespace wcm
