var re = /a+b/gi;
var q = 10 / 2;
var cond = q > 3 ? "big" : "small";
var un = typeof q;
var neg = -q;
var inc = q++;
var seq = (1, 2, 3);
switch (q) {
  case 1:
    out("one");
    break;
  default:
    out("other");
}
try {
  risky();
} catch (err) {
  console.log(err);
} finally {
  done();
}
do {
  q--;
} while (q > 0);
for (var k in obj) {
  use(k);
}
throw new Error("boom");
