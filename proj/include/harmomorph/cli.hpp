#pragma once

#include <iosfwd>

namespace harmomorph {

/// Entry point of the harmomorph tool: `verify`, `sample-fiber`, `catalog`.
/// Returns 0 when everything passed, 1 on a failed verdict, 2 on a
/// configuration or usage error.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace harmomorph
