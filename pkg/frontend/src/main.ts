/** Browser entry point: one Console instance, innerHTML re-render after
 * every action, clicks delegated through data-action attributes. The API
 * base comes from the ?api= query parameter and the reviewer id is asked
 * for once and kept in localStorage. */

import { ReviewApi } from "./api.js";
import { Console } from "./console.js";
import type { SortKey } from "./state.js";

const DEFAULT_API = "http://127.0.0.1:8765";

function apiBase(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("api");
  return fromQuery ?? DEFAULT_API;
}

function rememberedReviewer(): string {
  const stored = window.localStorage.getItem("pdag-reviewer");
  if (stored) return stored;
  const entered = (window.prompt("reviewer id") ?? "").trim();
  if (entered) window.localStorage.setItem("pdag-reviewer", entered);
  return entered;
}

export function mount(root: HTMLElement): Console {
  const console_ = new Console(new ReviewApi(apiBase()));
  console_.setReviewer(rememberedReviewer());

  const paint = () => {
    root.innerHTML = console_.html();
  };

  root.addEventListener("click", (event) => {
    const target = (event.target as HTMLElement).closest<HTMLElement>("[data-action]");
    if (!target) return;
    const run = () => {
      const action = target.dataset.action;
      if (action === "open") return console_.open(target.dataset.run ?? "");
      if (action === "back") return console_.back();
      if (action === "retry") return console_.retry();
      if (action === "refresh") return console_.retry();
      if (action === "sort") {
        console_.setSort((target.dataset.key ?? "served") as SortKey);
        return;
      }
      if (action === "select") {
        console_.select(target.dataset.item ?? "");
        return;
      }
      if (action === "resolve") {
        return console_.resolve(
          target.dataset.item ?? "",
          target.dataset.outcome === "fail" ? "fail" : "pass",
        );
      }
      if (action === "flag") {
        return console_.flagSyntax(target.dataset.value === "true");
      }
      return;
    };
    Promise.resolve(run()).then(paint);
  });

  root.addEventListener("change", (event) => {
    const input = event.target as HTMLInputElement;
    if (input.dataset.field === "reviewer") {
      console_.setReviewer(input.value);
      window.localStorage.setItem("pdag-reviewer", console_.reviewer);
    }
  });

  console_.refresh().then(paint);
  return console_;
}

const root = document.getElementById("app");
if (root) mount(root);
