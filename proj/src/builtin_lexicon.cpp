#include "revmine/sentiment.hpp"

namespace revmine {

std::string_view builtin_lexicon_text() {
  static constexpr std::string_view kText = R"LEX(# Bundled sentiment lexicon.
# token<TAB>strength | #negation<TAB>token | #booster<TAB>token<TAB>delta
amazing	5
awesome	5
excellent	5
fantastic	5
outstanding	5
perfect	5
superb	5
wonderful	5
brilliant	5
flawless	5
incredible	5
phenomenal	5
exceptional	5
magnificent	5
marvelous	5
love	4
loved	4
loves	4
lovely	4
great	4
beautiful	4
delightful	4
impressive	4
terrific	4
fabulous	4
enjoy	4
enjoyed	4
enjoying	4
enjoyable	4
favorite	4
favourite	4
best	4
superior	4
seamless	4
smooth	4
good	3
nice	3
happy	3
glad	3
pleased	3
useful	3
helpful	3
reliable	3
fast	3
quick	3
easy	3
intuitive	3
convenient	3
recommend	3
recommended	3
like	3
liked	3
likes	3
cool	3
fun	3
handy	3
efficient	3
stable	3
clean	3
satisfied	3
thank	3
thanks	3
ok	2
okay	2
fine	2
decent	2
fair	2
works	2
working	2
improved	2
improvement	2
better	2
simple	2
solid	2
adequate	2
acceptable	2
reasonable	2
clear	2
responsive	2
friendly	2
safe	2
secure	2
interesting	2
worst	-5
terrible	-5
horrible	-5
awful	-5
useless	-5
garbage	-5
trash	-5
pathetic	-5
disgusting	-5
atrocious	-5
unusable	-5
scam	-5
disaster	-5
hate	-5
hated	-5
hates	-5
crash	-4
crashes	-4
crashed	-4
crashing	-4
broken	-4
freeze	-4
freezes	-4
froze	-4
frozen	-4
bad	-4
poor	-4
annoying	-4
frustrating	-4
frustrated	-4
ridiculous	-4
unacceptable	-4
disappointed	-4
disappointing	-4
disappointment	-4
fail	-4
fails	-4
failed	-4
failing	-4
failure	-4
rubbish	-4
stupid	-4
bug	-3
bugs	-3
buggy	-3
glitch	-3
glitches	-3
glitchy	-3
error	-3
errors	-3
slow	-3
laggy	-3
lag	-3
lags	-3
problem	-3
problems	-3
issue	-3
issues	-3
wrong	-3
stuck	-3
hang	-3
hangs	-3
unable	-3
unresponsive	-3
missing	-3
lost	-3
lose	-3
losing	-3
confusing	-3
confused	-3
annoyed	-3
angry	-3
upset	-3
worse	-3
sucks	-3
sucked	-3
difficult	-2
hard	-2
complicated	-2
weird	-2
strange	-2
odd	-2
unclear	-2
clunky	-2
messy	-2
boring	-2
expensive	-2
delay	-2
delayed	-2
delays	-2
waste	-2
wasted	-2
wait	-2
waiting	-2
unfortunately	-2
sadly	-2
sorry	-2
meh	-2
mediocre	-2
inconvenient	-2
tedious	-2
limited	-2
wow	3
yay	3
stellar	3
neat	3
sweet	3
elegant	3
polished	3
powerful	3
accurate	3
affordable	3
free	3
worth	3
valuable	3
essential	3
calm	2
comfortable	2
consistent	2
flexible	2
lightweight	2
modern	2
organized	2
precise	2
quiet	2
relevant	2
robust	2
steady	2
straightforward	2
tidy	2
timely	2
usable	2
accessible	2
infuriating	-4
horrendous	-4
dreadful	-4
lousy	-4
shoddy	-4
crappy	-4
junk	-4
worthless	-4
furious	-4
hopeless	-4
unstable	-3
unreliable	-3
inaccurate	-3
corrupt	-3
corrupted	-3
drain	-3
drains	-3
draining	-3
overheat	-3
overheats	-3
spam	-3
spammy	-3
intrusive	-3
invasive	-3
bloated	-3
sluggish	-3
outdated	-3
disconnect	-3
disconnects	-3
incompatible	-3
ugly	-2
cluttered	-2
noisy	-2
awkward	-2
pricey	-2
unnecessary	-2
irrelevant	-2
tiny	-2
vague	-2
repetitive	-2
#negation	not
#negation	no
#negation	never
#negation	cannot
#negation	can't
#negation	don't
#negation	doesn't
#negation	didn't
#negation	won't
#negation	isn't
#negation	wasn't
#negation	aren't
#negation	shouldn't
#negation	couldn't
#negation	wouldn't
#negation	nothing
#negation	nobody
#negation	neither
#negation	nor
#negation	without
#negation	hardly
#negation	barely
#booster	extremely	2
#booster	incredibly	2
#booster	absolutely	2
#booster	totally	2
#booster	completely	2
#booster	utterly	2
#booster	very	1
#booster	really	1
#booster	so	1
#booster	super	1
#booster	highly	1
#booster	too	1
#booster	quite	1
#booster	most	1
#booster	truly	1
#booster	seriously	1
#booster	slightly	-1
#booster	somewhat	-1
#booster	kinda	-1
#booster	little	-1
#booster	bit	-1
#booster	fairly	-1
)LEX";
  return kText;
}

}  // namespace revmine
