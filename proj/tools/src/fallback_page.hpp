#pragma once

namespace lmscreen::cli {

// Minimal review page served at "/" when no --ui-dir is given.
inline constexpr const char* kFallbackPage = R"HTML(<!doctype html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>lmscreen review</title>
<style>
body{font-family:sans-serif;margin:2em;max-width:1000px}
.views{display:flex;flex-wrap:wrap;gap:8px}
.views div{width:320px}
.views svg{width:320px;height:240px}
#status{color:#555}
#banner{color:#b00}
</style>
</head>
<body>
<h1>Landmark review</h1>
<p id="status">loading...</p>
<p id="banner"></p>
<div id="item" hidden>
  <h2 id="title"></h2>
  <p id="coords"></p>
  <div class="views" id="views"></div>
  <form id="form">
    <fieldset><legend>Category</legend>
      <label><input type="radio" name="category" value="certain"> certain</label>
      <label><input type="radio" name="category" value="unsure"> unsure</label>
      <label><input type="radio" name="category" value="normal"> normal</label>
    </fieldset>
    <fieldset><legend>Score</legend>
      <label><input type="radio" name="score" value="1"> 1 poor</label>
      <label><input type="radio" name="score" value="2"> 2 questionable</label>
      <label><input type="radio" name="score" value="3"> 3 acceptable</label>
      <label><input type="radio" name="score" value="4"> 4 good</label>
    </fieldset>
    <button id="submit" type="submit" disabled>Submit</button>
  </form>
  <p id="reveal"></p>
  <button id="next" hidden>Next</button>
</div>
<script>
let queue = [], pos = 0, busy = false;
const $ = (id) => document.getElementById(id);
const fmt = (v) => v.map((x) => x.toFixed(2)).join(", ");

async function load() {
  try {
    const r = await fetch("/api/queue");
    queue = (await r.json()).items.filter((i) => !i.reviewed);
    $("banner").textContent = "";
    show();
  } catch (e) {
    $("banner").textContent = "server unreachable, retrying...";
    setTimeout(load, 2000);
  }
}

async function show() {
  $("reveal").textContent = "";
  $("next").hidden = true;
  $("form").reset();
  $("submit").disabled = true;
  if (pos >= queue.length) {
    $("item").hidden = true;
    $("status").textContent = "Review complete.";
    return;
  }
  const it = queue[pos];
  $("status").textContent = `item ${pos + 1} of ${queue.length}`;
  const c = await (await fetch("/api/case/" + encodeURIComponent(it.case_id) + "?blind=1")).json();
  const lm = c.landmarks.find((l) => l.id === it.landmark_id);
  $("title").textContent = `case ${it.case_id}, landmark ${it.landmark_id}`;
  $("coords").textContent = `fixed (${fmt(lm.fixed)}) mm, moving (${fmt(lm.moving)}) mm`;
  const views = $("views");
  views.innerHTML = "";
  for (const k of ["variogram", "xy", "xz", "yz"]) {
    const d = document.createElement("div");
    d.innerHTML = c.svg[k];
    views.appendChild(d);
  }
  $("item").hidden = false;
}

$("form").addEventListener("change", () => {
  const f = new FormData($("form"));
  $("submit").disabled = busy || !f.get("category") || !f.get("score");
});

$("form").addEventListener("submit", async (ev) => {
  ev.preventDefault();
  if (busy) return;
  busy = true;
  $("submit").disabled = true;
  const f = new FormData($("form"));
  const it = queue[pos];
  const body = {case_id: it.case_id, landmark_id: it.landmark_id,
                category: f.get("category"), score: Number(f.get("score"))};
  try {
    const r = await fetch("/api/verdict", {method: "POST",
      headers: {"Content-Type": "application/json"}, body: JSON.stringify(body)});
    if (r.status !== 204) {
      $("banner").textContent = "rejected: " + (await r.text());
      $("submit").disabled = false;
      return;
    }
    $("banner").textContent = "";
    const c = await (await fetch("/api/case/" + encodeURIComponent(it.case_id))).json();
    const flags = c.outliers.filter((o) => o.landmark_id === it.landmark_id).map((o) => o.kind);
    for (const f of c.findings) {
      if (f.kind === "isolated" && f.groups[0].includes(it.landmark_id)) flags.push("isolated");
    }
    $("reveal").textContent = flags.length ? "algorithm flag: " + flags.join(", ") : "not flagged";
    $("next").hidden = false;
  } catch (e) {
    $("banner").textContent = "server unreachable; verdict not saved";
    $("submit").disabled = false;
  } finally {
    busy = false;
  }
});

$("next").addEventListener("click", () => { pos += 1; show(); });
load();
</script>
</body>
</html>
)HTML";

}  // namespace lmscreen::cli
