var total = 0;
for (var i = 0; i < 10; i++) {
  total += i;
}
while (total > 0) {
  total = total - 2;
}
if (total === 0) {
  report("zero");
} else if (total < 0) {
  report("negative");
} else {
  report("positive");
}
for (;;) {
  break;
}
