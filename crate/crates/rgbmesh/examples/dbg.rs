use rgbmesh::refine::uniform_refine;
use rgbmesh::coarsen::detect_red_middles;
use rgbmesh::topology::build_edge_topology;
use rgbmesh::mesh::Mesh;

fn main() {
    // double uniform red refinement of a single triangle
    let tri = Mesh::new(vec![[0.0,0.0],[2.0,0.0],[1.0,1.5]], vec![[0,1,2]], 3, vec![]).unwrap();
    let lvl2 = uniform_refine(&tri, 2).unwrap();
    let topo = build_edge_topology(&lvl2).unwrap();
    let detected = detect_red_middles(&lvl2, &topo);
    println!("elements: {}", lvl2.n_elements());
    println!("detected middles: {detected:?}");
    // print all elements with coordinates
    for (e, elem) in lvl2.elements().iter().enumerate() {
        let p: Vec<String> = elem.iter().map(|&v| {
            let q = lvl2.point(v);
            format!("{v}:({},{})", q[0], q[1])
        }).collect();
        println!("  row {e}: {}", p.join(" "));
    }
}
