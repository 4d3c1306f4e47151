#pragma once

#include "bumptree/errors.hpp"
#include "bumptree/random.hpp"
#include "bumptree/tree.hpp"
#include "bumptree/weights.hpp"
#include "bumptree/builders.hpp"
#include "bumptree/optimal.hpp"
#include "bumptree/optimizer.hpp"
#include "bumptree/oracle.hpp"
#include "bumptree/bench.hpp"
