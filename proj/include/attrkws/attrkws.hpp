#pragma once

#include "attrkws/ctc.hpp"
#include "attrkws/dat_model.hpp"
#include "attrkws/dat_trainer.hpp"
#include "attrkws/decoder.hpp"
#include "attrkws/error.hpp"
#include "attrkws/eval.hpp"
#include "attrkws/frame_matrix.hpp"
#include "attrkws/inventory.hpp"
#include "attrkws/language_probe.hpp"
#include "attrkws/lexicon.hpp"
#include "attrkws/log_math.hpp"
#include "attrkws/manifest.hpp"
#include "attrkws/model_io.hpp"
#include "attrkws/synthetic.hpp"
