#pragma once

namespace d2d {

// Entry point behind the d2dsim binary; split out so tests can drive the
// real command path in-process. Returns the process exit status.
int cli_main(int argc, const char* const* argv);

}  // namespace d2d
