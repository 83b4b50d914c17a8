#pragma once

// Generated from data/phoneme_table.tsv; tests check the two stay in sync.

#include <string_view>

namespace attrkws {

inline constexpr std::string_view kDefaultPhonemeTable = R"TSV(# Default IPA phoneme -> (manner, place) table.
# Columns: ipa<TAB>manner<TAB>place. Trills are folded into "tap",
# laterals into "approximant"; pharyngeals use the nearest place, glottal.
# Vowel heights: semi-high = near-close, upper-mid = close-mid,
# lower-mid = open-mid, semi-mid = near-open.
#
# stops
p	stop	bilabial
b	stop	bilabial
t̪	stop	dental
d̪	stop	dental
t	stop	alveolar
d	stop	alveolar
ʈ	stop	retroflex
ɖ	stop	retroflex
c	stop	palatal
ɟ	stop	palatal
k	stop	velar
ɡ	stop	velar
g	stop	velar
q	stop	uvular
ɢ	stop	uvular
ʔ	stop	glottal
# nasals
m	nasal	bilabial
ɱ	nasal	labiodental
n̪	nasal	dental
n	nasal	alveolar
ɳ	nasal	retroflex
ɲ	nasal	palatal
ŋ	nasal	velar
ɴ	nasal	uvular
# taps, flaps and trills
ʙ	tap	bilabial
ⱱ	tap	labiodental
r	tap	alveolar
ɾ	tap	alveolar
ɽ	tap	retroflex
ʀ	tap	uvular
# fricatives
ɸ	fricative	bilabial
β	fricative	bilabial
f	fricative	labiodental
v	fricative	labiodental
θ	fricative	dental
ð	fricative	dental
s	fricative	alveolar
z	fricative	alveolar
ɬ	fricative	alveolar
ɮ	fricative	alveolar
ʃ	fricative	postalveolar
ʒ	fricative	postalveolar
ʂ	fricative	retroflex
ʐ	fricative	retroflex
ç	fricative	palatal
ʝ	fricative	palatal
ɕ	fricative	palatal
ʑ	fricative	palatal
x	fricative	velar
ɣ	fricative	velar
χ	fricative	uvular
ʁ	fricative	uvular
ħ	fricative	glottal
ʕ	fricative	glottal
h	fricative	glottal
ɦ	fricative	glottal
# affricates
pf	affricate	labiodental
ts	affricate	alveolar
dz	affricate	alveolar
tʃ	affricate	postalveolar
dʒ	affricate	postalveolar
ʈʂ	affricate	retroflex
ɖʐ	affricate	retroflex
tɕ	affricate	palatal
dʑ	affricate	palatal
# approximants and laterals
ʋ	approximant	labiodental
ɹ	approximant	alveolar
l	approximant	alveolar
ɫ	approximant	alveolar
ɻ	approximant	retroflex
ɭ	approximant	retroflex
j	approximant	palatal
ʎ	approximant	palatal
ɥ	approximant	palatal
w	approximant	velar
ɰ	approximant	velar
ʟ	approximant	velar
# vowels
i	vowel	high
y	vowel	high
ɨ	vowel	high
ʉ	vowel	high
ɯ	vowel	high
u	vowel	high
ɪ	vowel	semi-high
ʏ	vowel	semi-high
ʊ	vowel	semi-high
e	vowel	upper-mid
ø	vowel	upper-mid
ɘ	vowel	upper-mid
ɵ	vowel	upper-mid
ɤ	vowel	upper-mid
o	vowel	upper-mid
ə	vowel	mid
ɛ	vowel	lower-mid
œ	vowel	lower-mid
ɜ	vowel	lower-mid
ɞ	vowel	lower-mid
ʌ	vowel	lower-mid
ɔ	vowel	lower-mid
æ	vowel	semi-mid
ɐ	vowel	semi-mid
a	vowel	low
ɶ	vowel	low
ɑ	vowel	low
ɒ	vowel	low
ɚ	vowel	unknown
ɝ	vowel	unknown
)TSV";

}  // namespace attrkws
