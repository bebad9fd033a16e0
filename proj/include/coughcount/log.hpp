#pragma once

#include <functional>
#include <string>

namespace coughcount {

// Non-fatal diagnostics go through one process-wide sink (stderr by default).
using WarningSink = std::function<void(const std::string&)>;

void warn(const std::string& message);

// Returns the previous sink. Passing an empty function restores stderr.
WarningSink set_warning_sink(WarningSink sink);

}  // namespace coughcount
