#pragma once

namespace optdes::cli {

// Exit codes: 0 success, 1 runtime/data failure, 2 usage error.
int run(int argc, const char* const* argv);

}  // namespace optdes::cli
