#pragma once

namespace rot {

// ROTTAB text compiled into the library; see data/default_tables.rottab.
const char* embedded_tables_text();

}  // namespace rot
