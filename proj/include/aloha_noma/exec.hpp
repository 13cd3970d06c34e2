#pragma once

namespace aloha_noma {

// Which loop body the Monte-Carlo drivers run. Results are bit-identical
// either way; the serial path exists as a reference for tests and the
// benchmark tool.
enum class Execution {
    serial,
    parallel,
};

} // namespace aloha_noma
