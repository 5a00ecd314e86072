#ifndef MAXREG_HPP
#define MAXREG_HPP

#include "maxreg/balayage.hpp"
#include "maxreg/config.hpp"
#include "maxreg/expm.hpp"
#include "maxreg/io.hpp"
#include "maxreg/maxreg.hpp"
#include "maxreg/operator.hpp"
#include "maxreg/runner.hpp"
#include "maxreg/squarefn.hpp"
#include "maxreg/symbols.hpp"
#include "maxreg/timegrid.hpp"
#include "maxreg/verify.hpp"

#endif  // MAXREG_HPP
