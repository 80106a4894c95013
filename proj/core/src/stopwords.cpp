#include "talkprofiler/tokenizer.hpp"

namespace talkprofiler {
namespace {

// Mirror of core/data/stopwords.txt (list version 1); a test keeps the two
// in sync.
constexpr std::string_view kDefaultStopwords = R"(a
about
above
after
again
against
all
although
always
am
among
an
and
another
any
anyone
anything
are
around
as
at
be
because
been
before
being
below
between
both
but
by
can
cannot
could
did
do
does
doing
down
during
each
either
else
enough
ever
every
everyone
everything
few
for
from
further
had
has
have
having
he
her
here
hers
herself
him
himself
his
how
i
if
in
into
is
it
its
itself
just
less
may
me
might
mine
more
most
much
must
my
myself
neither
never
no
none
nor
not
nothing
now
of
off
on
once
only
or
other
others
ought
our
ours
ourselves
out
over
own
quite
rather
same
several
shall
she
should
since
so
some
somebody
someone
something
sometimes
somewhere
soon
still
such
than
that
the
their
theirs
them
themselves
then
there
therefore
these
they
this
those
though
through
throughout
thus
to
too
toward
towards
under
unless
until
up
upon
us
very
was
we
were
what
whatever
when
whenever
where
wherever
whether
which
while
who
whom
whose
why
will
with
within
without
would
yet
you
your
yours
yourself
yourselves)";

}  // namespace

const Stoplist& Stoplist::default_list() {
  static const Stoplist list = [] {
    std::vector<std::string_view> words;
    std::string_view rest = kDefaultStopwords;
    while (!rest.empty()) {
      const std::size_t nl = rest.find('\n');
      const std::string_view line = rest.substr(0, nl);
      rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
      if (!line.empty()) words.push_back(line);
    }
    return Stoplist::from_words(words);
  }();
  return list;
}

}  // namespace talkprofiler
