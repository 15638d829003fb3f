#pragma once

#include "irstd/admm.hpp"
#include "irstd/asstv.hpp"
#include "irstd/error.hpp"
#include "irstd/eval.hpp"
#include "irstd/fft.hpp"
#include "irstd/l21.hpp"
#include "irstd/pipeline.hpp"
#include "irstd/random.hpp"
#include "irstd/sequence.hpp"
#include "irstd/synth.hpp"
#include "irstd/tensor.hpp"
#include "irstd/tproduct.hpp"
#include "irstd/tqr.hpp"
