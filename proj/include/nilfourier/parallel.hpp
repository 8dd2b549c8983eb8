#pragma once

namespace nilfourier {

// Serial is the reference path; Parallel spreads grid nodes over OpenMP
// threads and reduces in the same fixed order, so both give identical sums.
enum class Execution { Serial, Parallel };

// Thread count used by Parallel: NILFOURIER_THREADS if set and positive,
// otherwise the OpenMP default.
int thread_limit();

}  // namespace nilfourier
