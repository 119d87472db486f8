#pragma once

#include "meslab/arith.hpp"
#include "meslab/collective.hpp"
#include "meslab/geometry.hpp"
#include "meslab/hilbert.hpp"
#include "meslab/mes.hpp"
#include "meslab/mub.hpp"
#include "meslab/protocols.hpp"
#include "meslab/report.hpp"
#include "meslab/version.hpp"
