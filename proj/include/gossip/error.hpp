#pragma once

#include <stdexcept>
#include <string>

namespace gossip {

/// Base class of every error raised by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad argument or violated precondition.
class invalid_argument : public error {
public:
    using error::error;
};

/// Arc list is malformed (endpoint out of range, duplicate arc).
class graph_error : public error {
public:
    using error::error;
};

/// Graph is not strongly connected, or a generator failed to produce a
/// strongly connected instance within its attempt cap.
class connectivity_error : public graph_error {
public:
    using graph_error::graph_error;
};

/// A brute-force computation was requested above its size cap.
class size_cap_error : public error {
public:
    using error::error;
};

/// A numerical result or bound does not apply to the given parameters.
class inapplicable_error : public error {
public:
    using error::error;
};

} // namespace gossip
